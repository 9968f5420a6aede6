#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "sdd/errors.hpp"
#include "sdd/models.hpp"

namespace sdd {

namespace {

constexpr char kMagic[4] = {'S', 'D', 'D', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

// Explicit little-endian encoding so files are portable across hosts.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    void f64_vec(const std::vector<double>& v) {
        u64(v.size());
        for (double d : v) f64(d);
    }
    void f64_mat(const std::vector<std::vector<double>>& m) {
        u64(m.size());
        for (const auto& row : m) f64_vec(row);
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint8_t u8() {
        char c;
        if (!in_.get(c)) fail("unexpected end of file");
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t len = u32();
        if (len > (1u << 26)) fail("string length is implausible");
        std::string s(len, '\0');
        if (!in_.read(s.data(), len)) fail("unexpected end of file in string");
        return s;
    }
    std::vector<double> f64_vec(std::uint64_t expect = UINT64_MAX) {
        const std::uint64_t n = u64();
        if (n > (1u << 28)) fail("vector length is implausible");
        if (expect != UINT64_MAX && n != expect) fail("vector length mismatch");
        std::vector<double> v(n);
        for (auto& d : v) d = f64();
        return v;
    }
    std::vector<std::vector<double>> f64_mat(std::uint64_t rows_expect,
                                             std::uint64_t cols_expect) {
        const std::uint64_t n = u64();
        if (n != rows_expect) fail("matrix row count mismatch");
        std::vector<std::vector<double>> m(n);
        for (auto& row : m) row = f64_vec(cols_expect);
        return m;
    }

    [[noreturn]] void fail(const std::string& why) const {
        raise(ErrorCode::CorruptModel, "model file: " + why);
    }

private:
    std::istream& in_;
};

void write_vocab(Writer& w, const Vocabulary& vocab) {
    w.u64(vocab.n_docs);
    w.u32(static_cast<std::uint32_t>(vocab.index_to_term.size()));
    for (std::size_t i = 0; i < vocab.index_to_term.size(); ++i) {
        w.str(vocab.index_to_term[i]);
        w.u64(vocab.doc_freq[i]);
    }
}

Vocabulary read_vocab(Reader& r) {
    Vocabulary vocab;
    vocab.n_docs = r.u64();
    const std::uint32_t n_terms = r.u32();
    vocab.index_to_term.reserve(n_terms);
    vocab.doc_freq.reserve(n_terms);
    for (std::uint32_t i = 0; i < n_terms; ++i) {
        std::string term = r.str();
        if (!vocab.term_to_index.emplace(term, i).second) r.fail("duplicate vocabulary term");
        vocab.index_to_term.push_back(std::move(term));
        vocab.doc_freq.push_back(r.u64());
    }
    return vocab;
}

}  // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open for writing: " + path.string());
    Writer w(out);

    out.write(kMagic, 4);
    w.u32(kFormatVersion);
    w.u8(static_cast<std::uint8_t>(model.family));
    w.i32(model.n_classes);
    w.str(model.tfidf_variant);
    write_vocab(w, model.vocab);

    switch (model.family) {
        case ModelFamily::Mnb: {
            const auto& m = std::get<MnbModel>(model.model);
            w.f64(m.alpha);
            w.u32(m.vocab_size);
            w.f64_vec(m.log_prior);
            w.f64_mat(m.log_likelihood);
            break;
        }
        case ModelFamily::LogReg: {
            const auto& m = std::get<LogRegModel>(model.model);
            w.f64(m.l2_lambda);
            w.u32(m.vocab_size);
            w.f64_vec(m.bias);
            w.f64_mat(m.weights);
            w.u64(m.trace.iterations);
            w.f64(m.trace.final_objective);
            w.f64_vec(m.trace.objective_history);
            break;
        }
        case ModelFamily::LinearSvm: {
            const auto& m = std::get<SvmOvrModel>(model.model);
            w.f64(m.l2_lambda);
            w.u64(m.epochs);
            w.u32(m.vocab_size);
            w.f64_vec(m.bias);
            w.f64_mat(m.weights);
            for (std::uint8_t present : m.class_present) w.u8(present);
            break;
        }
        case ModelFamily::RandomForest: {
            const auto& m = std::get<RfModel>(model.model);
            w.u32(m.vocab_size);
            w.u64(m.params.n_trees);
            w.u64(m.params.max_depth);
            w.u64(m.params.m_features);
            w.u64(m.params.min_leaf);
            w.u8(m.params.bootstrap ? 1 : 0);
            w.u64(m.seed);
            w.u32(static_cast<std::uint32_t>(m.trees.size()));
            for (const auto& tree : m.trees) {
                w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
                for (const auto& node : tree.nodes) {
                    w.i32(node.feature);
                    w.f64(node.threshold);
                    w.i32(node.left);
                    w.i32(node.right);
                    w.u32(static_cast<std::uint32_t>(node.histogram.size()));
                    for (std::uint32_t h : node.histogram) w.u32(h);
                }
            }
            break;
        }
    }
    if (!out) raise(ErrorCode::IoFailure, "write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path)) {
            raise(ErrorCode::FileNotFound, "no such file: " + path.string());
        }
        raise(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    Reader r(in);

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        raise(ErrorCode::CorruptModel, "model file: bad magic");
    }
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
        raise(ErrorCode::VersionMismatch,
              "model format version " + std::to_string(version) + ", expected " +
                  std::to_string(kFormatVersion));
    }

    TrainedModel model;
    const std::uint8_t family_code = r.u8();
    if (family_code > 3) r.fail("unknown model family code");
    model.family = static_cast<ModelFamily>(family_code);
    model.n_classes = r.i32();
    if (model.n_classes < 1 || model.n_classes > 1024) r.fail("implausible class count");
    model.tfidf_variant = r.str();
    model.vocab = read_vocab(r);

    const auto c_count = static_cast<std::uint64_t>(model.n_classes);
    const std::uint64_t v_count = model.vocab.size();

    switch (model.family) {
        case ModelFamily::Mnb: {
            MnbModel m;
            m.n_classes = model.n_classes;
            m.alpha = r.f64();
            m.vocab_size = r.u32();
            if (m.vocab_size != v_count) r.fail("vocabulary size mismatch");
            m.log_prior = r.f64_vec(c_count);
            m.log_likelihood = r.f64_mat(c_count, v_count);
            model.model = std::move(m);
            break;
        }
        case ModelFamily::LogReg: {
            LogRegModel m;
            m.n_classes = model.n_classes;
            m.l2_lambda = r.f64();
            m.vocab_size = r.u32();
            if (m.vocab_size != v_count) r.fail("vocabulary size mismatch");
            m.bias = r.f64_vec(c_count);
            m.weights = r.f64_mat(c_count, v_count);
            m.trace.iterations = r.u64();
            m.trace.final_objective = r.f64();
            m.trace.objective_history = r.f64_vec();
            model.model = std::move(m);
            break;
        }
        case ModelFamily::LinearSvm: {
            SvmOvrModel m;
            m.n_classes = model.n_classes;
            m.l2_lambda = r.f64();
            m.epochs = r.u64();
            m.vocab_size = r.u32();
            if (m.vocab_size != v_count) r.fail("vocabulary size mismatch");
            m.bias = r.f64_vec(c_count);
            m.weights = r.f64_mat(c_count, v_count);
            m.class_present.resize(c_count);
            for (auto& present : m.class_present) present = r.u8();
            model.model = std::move(m);
            break;
        }
        case ModelFamily::RandomForest: {
            RfModel m;
            m.n_classes = model.n_classes;
            m.vocab_size = r.u32();
            if (m.vocab_size != v_count) r.fail("vocabulary size mismatch");
            m.params.n_trees = r.u64();
            m.params.max_depth = r.u64();
            m.params.m_features = r.u64();
            m.params.min_leaf = r.u64();
            m.params.bootstrap = r.u8() != 0;
            m.seed = r.u64();
            const std::uint32_t n_trees = r.u32();
            if (n_trees > (1u << 20)) r.fail("implausible tree count");
            m.trees.resize(n_trees);
            for (auto& tree : m.trees) {
                const std::uint32_t n_nodes = r.u32();
                if (n_nodes == 0 || n_nodes > (1u << 26)) r.fail("implausible node count");
                tree.nodes.resize(n_nodes);
                for (auto& node : tree.nodes) {
                    node.feature = r.i32();
                    node.threshold = r.f64();
                    node.left = r.i32();
                    node.right = r.i32();
                    const std::uint32_t hist = r.u32();
                    if (hist != c_count) r.fail("leaf histogram width mismatch");
                    node.histogram.resize(hist);
                    for (auto& h : node.histogram) h = r.u32();
                    const bool is_leaf = node.feature < 0;
                    if (!is_leaf &&
                        (node.left < 0 || node.right < 0 ||
                         node.left >= static_cast<std::int32_t>(n_nodes) ||
                         node.right >= static_cast<std::int32_t>(n_nodes) ||
                         node.feature >= static_cast<std::int32_t>(v_count))) {
                        r.fail("split node references out of range");
                    }
                }
            }
            model.model = std::move(m);
            break;
        }
    }

    // anything left over means the file was not produced by save_model
    if (in.peek() != std::char_traits<char>::eof()) {
        raise(ErrorCode::CorruptModel, "model file: trailing bytes");
    }
    return model;
}

}  // namespace sdd
