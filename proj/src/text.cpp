#include "sdd/text.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "sdd/errors.hpp"
#include "sdd/utf8.hpp"

namespace sdd {

namespace {

constexpr char32_t kArabicKaf = 0x0643;
constexpr char32_t kKurdishKaf = 0x06A9;
constexpr char32_t kArabicYeh = 0x064A;
constexpr char32_t kAlefMaksura = 0x0649;
constexpr char32_t kFarsiYeh = 0x06CC;
constexpr char32_t kTatweel = 0x0640;
constexpr char32_t kZwnj = 0x200C;

bool is_basic_latin_letter(char32_t cp) {
    return (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z');
}

// Verifies that every mapping output is a fixed point of the table, which
// makes normalize_script idempotent by construction.
void check_idempotent_closure(const NormalizationTable& table) {
    for (const auto& [from, to] : table.char_map) {
        for (char32_t cp : to) {
            if (table.char_map.count(cp) || table.strip_set.count(cp)) {
                raise(ErrorCode::InvalidSpec,
                      "normalization output U+" + std::to_string(cp) +
                          " is itself rewritten; table would not be idempotent");
            }
        }
    }
}

std::u32string apply_table(const std::u32string& cps, const NormalizationTable& table) {
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (table.strip_set.count(cp)) continue;
        auto it = table.char_map.find(cp);
        if (it != table.char_map.end()) {
            out.append(it->second);
        } else {
            out.push_back(cp);
        }
    }
    return out;
}

unsigned hex_value(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    raise(ErrorCode::MalformedRecord, std::string("invalid hex digit '") + c + "'");
}

char32_t parse_hex_cp(std::string_view text) {
    if (text.empty() || text.size() > 6) {
        raise(ErrorCode::MalformedRecord, "invalid codepoint '" + std::string(text) + "'");
    }
    char32_t value = 0;
    for (char c : text) value = value * 16 + hex_value(c);
    if (value > 0x10FFFF) {
        raise(ErrorCode::MalformedRecord, "codepoint out of range: " + std::string(text));
    }
    return value;
}

void append_hex(std::string& out, char32_t cp) {
    static const char* digits = "0123456789ABCDEF";
    char buf[7];
    int len = 0;
    char32_t v = cp;
    do {
        buf[len++] = digits[v & 0xF];
        v >>= 4;
    } while (v != 0);
    while (len < 4) buf[len++] = '0';
    for (int i = len - 1; i >= 0; --i) out.push_back(buf[i]);
}

// URL and @-mention passes drop whole whitespace-delimited tokens; both run
// before any character-level removal so their prefixes are still intact.
bool is_url_token(const std::u32string& token) {
    if (token.size() >= 5) {
        std::u32string lowered;
        lowered.reserve(8);
        for (std::size_t i = 0; i < std::min<std::size_t>(token.size(), 12); ++i) {
            char32_t c = token[i];
            if (c >= U'A' && c <= U'Z') c += 32;
            lowered.push_back(c);
        }
        if (lowered.compare(0, 4, U"www.") == 0) return true;
    }
    // scheme://  with scheme = [A-Za-z][A-Za-z0-9+.-]*
    if (!is_basic_latin_letter(token.empty() ? 0 : token[0])) return false;
    std::size_t i = 1;
    while (i < token.size() &&
           (is_basic_latin_letter(token[i]) || (token[i] >= U'0' && token[i] <= U'9') ||
            token[i] == U'+' || token[i] == U'.' || token[i] == U'-')) {
        ++i;
    }
    return i + 2 < token.size() && token[i] == U':' && token[i + 1] == U'/' &&
           token[i + 2] == U'/';
}

bool is_mention_token(const std::u32string& token) {
    return token.size() >= 2 && token[0] == U'@';
}

std::u32string drop_tokens(const std::u32string& cps,
                           bool (*predicate)(const std::u32string&),
                           std::size_t& dropped) {
    std::u32string out;
    out.reserve(cps.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        if (is_space_cp(cps[i])) {
            out.push_back(cps[i]);
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cps.size() && !is_space_cp(cps[j])) ++j;
        std::u32string token = cps.substr(i, j - i);
        if (predicate(token)) {
            ++dropped;
            out.push_back(U' ');  // keep a boundary between neighbors
        } else {
            out.append(token);
        }
        i = j;
    }
    return out;
}

}  // namespace

NoiseStats& NoiseStats::operator+=(const NoiseStats& other) {
    urls += other.urls;
    mentions += other.mentions;
    latin += other.latin;
    emoji += other.emoji;
    digits += other.digits;
    punctuation += other.punctuation;
    return *this;
}

const NormalizationTable& NormalizationTable::defaults() {
    static const NormalizationTable instance = [] {
        NormalizationTable t;
        t.char_map[kArabicKaf] = std::u32string(1, kKurdishKaf);
        t.char_map[kArabicYeh] = std::u32string(1, kFarsiYeh);
        t.char_map[kAlefMaksura] = std::u32string(1, kFarsiYeh);
        t.strip_set.insert(kTatweel);
        for (char32_t cp = 0x064B; cp <= 0x065F; ++cp) t.strip_set.insert(cp);
        t.strip_set.insert(kZwnj);
        check_idempotent_closure(t);
        return t;
    }();
    return instance;
}

NormalizationTable NormalizationTable::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        if (!std::filesystem::exists(path)) {
            raise(ErrorCode::FileNotFound, "no such file: " + path.string());
        }
        raise(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    NormalizationTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            raise(ErrorCode::MalformedRecord,
                  path.string() + ": line " + std::to_string(line_no) +
                      " is not 'from_hex,to_hex'");
        }
        const char32_t from = parse_hex_cp(line.substr(0, comma));
        std::string to_part = line.substr(comma + 1);
        // strip surrounding whitespace
        const auto b = to_part.find_first_not_of(" \t");
        if (b == std::string::npos) {
            table.strip_set.insert(from);
            continue;
        }
        const auto e = to_part.find_last_not_of(" \t");
        to_part = to_part.substr(b, e - b + 1);
        std::u32string to;
        std::istringstream parts(to_part);
        std::string piece;
        while (parts >> piece) to.push_back(parse_hex_cp(piece));
        table.char_map[from] = std::move(to);
    }
    check_idempotent_closure(table);
    return table;
}

void NormalizationTable::write_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open for writing: " + path.string());
    out << "# script normalization rules: from_hex,to_hex (empty to_hex deletes)\n";
    for (const auto& [from, to] : char_map) {
        std::string line;
        append_hex(line, from);
        line.push_back(',');
        bool first = true;
        for (char32_t cp : to) {
            if (!first) line.push_back(' ');
            append_hex(line, cp);
            first = false;
        }
        out << line << '\n';
    }
    for (char32_t cp : strip_set) {
        std::string line;
        append_hex(line, cp);
        line.push_back(',');
        out << line << '\n';
    }
    if (!out) raise(ErrorCode::IoFailure, "write failed: " + path.string());
}

std::string normalize_script(std::string_view text) {
    return normalize_script(text, NormalizationTable::defaults());
}

std::string normalize_script(std::string_view text, const NormalizationTable& table) {
    return encode_utf8(apply_table(decode_utf8(text), table));
}

std::string strip_noise(std::string_view text, NoiseStats* stats) {
    NoiseStats local;
    std::u32string cps = decode_utf8(text);

    cps = drop_tokens(cps, &is_url_token, local.urls);
    cps = drop_tokens(cps, &is_mention_token, local.mentions);

    // Remove maximal Basic-Latin letter runs.
    {
        std::u32string out;
        out.reserve(cps.size());
        std::size_t i = 0;
        while (i < cps.size()) {
            if (is_basic_latin_letter(cps[i])) {
                while (i < cps.size() && is_basic_latin_letter(cps[i])) ++i;
                ++local.latin;
            } else {
                out.push_back(cps[i]);
                ++i;
            }
        }
        cps = std::move(out);
    }

    // Character-class removals: emoji/symbols, digits, punctuation.
    {
        std::u32string out;
        out.reserve(cps.size());
        for (char32_t cp : cps) {
            if (is_emoji_cp(cp)) {
                ++local.emoji;
            } else if (is_digit_cp(cp)) {
                ++local.digits;
            } else if (is_punctuation_cp(cp)) {
                ++local.punctuation;
            } else {
                out.push_back(cp);
            }
        }
        cps = std::move(out);
    }

    // Collapse whitespace runs to single spaces and trim.
    std::u32string collapsed;
    collapsed.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (is_space_cp(cp)) {
            pending_space = !collapsed.empty();
        } else {
            if (pending_space) collapsed.push_back(U' ');
            pending_space = false;
            collapsed.push_back(cp);
        }
    }

    if (stats) *stats += local;
    return encode_utf8(collapsed);
}

TokenSequence tokenize(std::string_view text) {
    TokenSequence tokens;
    const std::u32string cps = decode_utf8(text);
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_space_cp(cps[i])) ++i;
        std::size_t j = i;
        while (j < cps.size() && !is_space_cp(cps[j])) ++j;
        if (j > i) tokens.push_back(encode_utf8(cps.substr(i, j - i)));
        i = j;
    }
    return tokens;
}

ProcessedCorpus preprocess_corpus(const LabeledCorpus& corpus,
                                  const PreprocessOptions& options) {
    const NormalizationTable& table =
        options.table ? *options.table : NormalizationTable::defaults();

    ProcessedCorpus result;
    std::unordered_set<std::string> seen;
    for (const auto& post : corpus.posts) {
        if (!post.label) {
            raise(ErrorCode::UnlabeledPost, "post '" + post.id + "' has no label");
        }
        std::string text = post.text;
        if (options.normalize) text = normalize_script(text, table);
        if (options.strip) text = strip_noise(text, &result.stats.noise);
        TokenSequence tokens = tokenize(text);
        if (tokens.empty()) {
            if (options.drop_empty) {
                ++result.stats.empty;
                continue;
            }
        }
        if (options.dedup) {
            std::string key;
            for (const auto& t : tokens) {
                key.append(t);
                key.push_back('\x1F');
            }
            if (!seen.insert(std::move(key)).second) {
                ++result.stats.duplicates;
                continue;
            }
        }
        result.docs.push_back({post.id, *post.label, std::move(tokens)});
    }
    return result;
}

}  // namespace sdd
