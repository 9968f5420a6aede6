#include "sdd/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "sdd/errors.hpp"
#include "sdd/text.hpp"

namespace sdd {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path)) {
            raise(ErrorCode::FileNotFound, "no such file: " + path.string());
        }
        raise(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

// RFC-4180 parser.  Returns one vector of fields per record and the source
// line each record starts on.  Quoted fields may contain commas, doubled
// quotes and embedded newlines.
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

std::vector<CsvRecord> parse_csv(const std::string& data, const std::string& origin) {
    std::vector<CsvRecord> records;
    std::size_t i = 0;
    const std::size_t n = data.size();
    std::size_t line = 1;
    if (n >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;  // BOM

    while (i < n) {
        CsvRecord rec;
        rec.line = line;
        std::string field;
        bool in_quotes = false;
        bool record_done = false;
        while (i < n && !record_done) {
            const char c = data[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < n && data[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        in_quotes = false;
                        ++i;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                    ++i;
                }
            } else if (c == '"') {
                if (!field.empty()) {
                    raise(ErrorCode::MalformedRecord,
                          origin + ": stray quote in unquoted field at line " +
                              std::to_string(line));
                }
                in_quotes = true;
                ++i;
            } else if (c == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                ++i;
            } else if (c == '\r' || c == '\n') {
                if (c == '\r' && i + 1 < n && data[i + 1] == '\n') ++i;
                ++i;
                ++line;
                record_done = true;
            } else {
                field.push_back(c);
                ++i;
            }
        }
        if (in_quotes) {
            raise(ErrorCode::MalformedRecord,
                  origin + ": unterminated quoted field starting at line " +
                      std::to_string(rec.line));
        }
        rec.fields.push_back(std::move(field));
        records.push_back(std::move(rec));
    }
    return records;
}

void write_csv_field(std::ostream& out, std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << "\"\"";
        else out << c;
    }
    out << '"';
}

LabeledCorpus load_csv(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    const std::string origin = path.string();
    auto records = parse_csv(data, origin);
    if (records.empty()) {
        raise(ErrorCode::MissingColumn, origin + ": empty file, header 'id,text,label' expected");
    }

    const auto& header = records.front().fields;
    std::size_t id_col = header.size(), text_col = header.size(), label_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "id") id_col = c;
        else if (header[c] == "text") text_col = c;
        else if (header[c] == "label") label_col = c;
    }
    if (id_col == header.size()) raise(ErrorCode::MissingColumn, origin + ": no 'id' column");
    if (text_col == header.size()) raise(ErrorCode::MissingColumn, origin + ": no 'text' column");
    const bool has_label = label_col != header.size();

    LabeledCorpus corpus;
    corpus.provenance = "loaded from " + origin + " (csv)";
    std::unordered_set<std::string> seen_ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        auto& rec = records[r];
        if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // trailing newline
        if (rec.fields.size() != header.size()) {
            raise(ErrorCode::MalformedRecord,
                  origin + ": line " + std::to_string(rec.line) + " has " +
                      std::to_string(rec.fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
        }
        RawPost post;
        post.id = std::move(rec.fields[id_col]);
        post.text = std::move(rec.fields[text_col]);
        if (post.id.empty()) {
            raise(ErrorCode::MalformedRecord,
                  origin + ": empty id at line " + std::to_string(rec.line));
        }
        if (has_label && !rec.fields[label_col].empty()) {
            const std::string& token = rec.fields[label_col];
            try {
                post.label = label_from_token(token);
            } catch (const Error&) {
                raise(ErrorCode::UnknownLabel,
                      origin + ": unrecognized label '" + token + "' at line " +
                          std::to_string(rec.line));
            }
        }
        if (!seen_ids.insert(post.id).second) {
            raise(ErrorCode::DuplicateId,
                  origin + ": duplicate id '" + post.id + "' at line " +
                      std::to_string(rec.line));
        }
        corpus.posts.push_back(std::move(post));
    }
    return corpus;
}

LabeledCorpus load_jsonl(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    const std::string origin = path.string();
    LabeledCorpus corpus;
    corpus.provenance = "loaded from " + origin + " (jsonl)";
    std::unordered_set<std::string> seen_ids;

    std::istringstream in(data);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            raise(ErrorCode::MalformedRecord,
                  origin + ": invalid JSON object at line " + std::to_string(line_no));
        }
        if (!obj.contains("id") || !obj["id"].is_string()) {
            raise(ErrorCode::MissingColumn,
                  origin + ": missing 'id' at line " + std::to_string(line_no));
        }
        if (!obj.contains("text") || !obj["text"].is_string()) {
            raise(ErrorCode::MissingColumn,
                  origin + ": missing 'text' at line " + std::to_string(line_no));
        }
        RawPost post;
        post.id = obj["id"].get<std::string>();
        post.text = obj["text"].get<std::string>();
        if (post.id.empty()) {
            raise(ErrorCode::MalformedRecord,
                  origin + ": empty id at line " + std::to_string(line_no));
        }
        if (obj.contains("label") && !obj["label"].is_null()) {
            if (!obj["label"].is_string()) {
                raise(ErrorCode::UnknownLabel,
                      origin + ": non-string label at line " + std::to_string(line_no));
            }
            const auto token = obj["label"].get<std::string>();
            try {
                post.label = label_from_token(token);
            } catch (const Error&) {
                raise(ErrorCode::UnknownLabel,
                      origin + ": unrecognized label '" + token + "' at line " +
                          std::to_string(line_no));
            }
        }
        if (!seen_ids.insert(post.id).second) {
            raise(ErrorCode::DuplicateId,
                  origin + ": duplicate id '" + post.id + "' at line " +
                      std::to_string(line_no));
        }
        corpus.posts.push_back(std::move(post));
    }
    return corpus;
}

}  // namespace

bool LabeledCorpus::fully_labeled() const {
    for (const auto& post : posts) {
        if (!post.label) return false;
    }
    return true;
}

CorpusFormat corpus_format_from_name(std::string_view name) {
    if (name == "csv") return CorpusFormat::Csv;
    if (name == "jsonl") return CorpusFormat::Jsonl;
    raise(ErrorCode::InvalidArgument,
          "unknown corpus format '" + std::string(name) + "' (expected csv or jsonl)");
}

std::string_view corpus_format_name(CorpusFormat format) {
    return format == CorpusFormat::Csv ? "csv" : "jsonl";
}

LabeledCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    return format == CorpusFormat::Csv ? load_csv(path) : load_jsonl(path);
}

void write_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open for writing: " + path.string());

    if (format == CorpusFormat::Csv) {
        out << "id,text,label\n";
        for (const auto& post : corpus.posts) {
            write_csv_field(out, post.id);
            out << ',';
            write_csv_field(out, post.text);
            out << ',';
            if (post.label) out << label_token(*post.label);
            out << '\n';
        }
    } else {
        for (const auto& post : corpus.posts) {
            json obj;
            obj["id"] = post.id;
            obj["text"] = post.text;
            if (post.label) obj["label"] = std::string(label_token(*post.label));
            out << obj.dump() << '\n';
        }
    }
    if (!out) raise(ErrorCode::IoFailure, "write failed: " + path.string());
}

std::array<std::size_t, kNumLabels> class_counts(const LabeledCorpus& corpus) {
    std::array<std::size_t, kNumLabels> counts = {0, 0, 0};
    for (const auto& post : corpus.posts) {
        if (!post.label) {
            raise(ErrorCode::UnlabeledPost, "post '" + post.id + "' has no label");
        }
        ++counts[static_cast<int>(*post.label)];
    }
    return counts;
}

const KeywordSet& KeywordSet::defaults() {
    // The ten expert-selected depression-related search terms.
    static const KeywordSet instance{{
        "دڵتەنگی",
        "نەخۆشی دەرونی",
        "بێهیوایی",
        "خەمۆکی",
        "خۆکوشتن",
        "بێزاری لە ژیان",
        "بێتاقەت",
        "پەشیمانی",
        "نائومێدی",
        "غەمباری",
    }};
    return instance;
}

KeywordSet KeywordSet::from_file(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    KeywordSet set;
    std::istringstream in(data);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim ASCII whitespace
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        set.keywords.push_back(line.substr(first, last - first + 1));
    }
    return set;
}

LabeledCorpus filter_by_keywords(const LabeledCorpus& corpus, const KeywordSet& keywords) {
    if (keywords.keywords.empty()) {
        raise(ErrorCode::EmptyKeywordSet, "keyword set has no entries");
    }
    std::vector<std::string> normalized;
    normalized.reserve(keywords.keywords.size());
    for (const auto& kw : keywords.keywords) {
        std::string norm = normalize_script(kw);
        if (norm.empty()) {
            raise(ErrorCode::InvalidArgument,
                  "keyword '" + kw + "' is empty after normalization");
        }
        normalized.push_back(std::move(norm));
    }

    LabeledCorpus filtered;
    filtered.provenance = corpus.provenance + "; keyword-filtered (" +
                          std::to_string(normalized.size()) + " keywords)";
    for (const auto& post : corpus.posts) {
        const std::string text = normalize_script(post.text);
        for (const auto& kw : normalized) {
            if (text.find(kw) != std::string::npos) {
                filtered.posts.push_back(post);
                break;
            }
        }
    }
    return filtered;
}

}  // namespace sdd
