#include "lexiqx/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

#include "lexiqx/error.hpp"
#include "lexiqx/log.hpp"
#include "lexiqx/porter.hpp"

namespace lexiqx {

namespace fs = std::filesystem;

std::vector<std::string> Analyzer::terms(std::string_view text) const {
    std::vector<std::string> out;
    for (const auto& w : word_tokens(text)) {
        if (stop_->contains(w)) continue;
        out.push_back(porter_stem(w));
    }
    return out;
}

// --- corpus -------------------------------------------------------------------------

namespace {

std::string slurp(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_at(const std::string& text, std::size_t offset) {
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::optional<std::string_view> element(std::string_view body, std::string_view tag, std::size_t& from) {
    const std::string open = "<" + std::string(tag) + ">";
    const std::string close = "</" + std::string(tag) + ">";
    auto start = body.find(open, from);
    if (start == std::string_view::npos) return std::nullopt;
    start += open.size();
    auto end = body.find(close, start);
    if (end == std::string_view::npos) return std::nullopt;
    from = end + close.size();
    return body.substr(start, end - start);
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path.string());
    return in;
}

}  // namespace

std::vector<Document> read_trec_documents(std::istream& in, const std::string& name) {
    const std::string text = slurp(in);
    std::vector<Document> docs;
    std::size_t pos = 0;
    for (;;) {
        auto start = text.find("<DOC>", pos);
        auto stray_close = text.find("</DOC>", pos);
        if (start == std::string::npos) {
            if (stray_close != std::string::npos) {
                throw ParseError(name, line_at(text, stray_close), "</DOC> without <DOC>");
            }
            break;
        }
        if (stray_close < start) throw ParseError(name, line_at(text, stray_close), "</DOC> without <DOC>");
        auto end = text.find("</DOC>", start);
        if (end == std::string::npos) throw ParseError(name, line_at(text, start), "unterminated <DOC>");
        auto nested = text.find("<DOC>", start + 5);
        if (nested < end) throw ParseError(name, line_at(text, nested), "nested <DOC>");

        std::string_view body(text.data() + start + 5, end - start - 5);
        std::size_t cursor = 0;
        auto docno = element(body, "DOCNO", cursor);
        if (!docno || trim(*docno).empty()) {
            throw ParseError(name, line_at(text, start), "document at offset " + std::to_string(start) + " has no DOCNO");
        }
        Document d;
        d.docno = std::string(trim(*docno));
        cursor = 0;
        while (auto block = element(body, "TEXT", cursor)) {
            if (!d.text.empty()) d.text += '\n';
            d.text += *block;
        }
        docs.push_back(std::move(d));
        pos = end + 6;
    }
    return docs;
}

std::vector<Document> load_trec_corpus(const fs::path& path) {
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    } else if (fs::is_regular_file(path)) {
        files.push_back(path);
    } else {
        throw LoadError("corpus not found: " + path.string());
    }

    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    for (const auto& f : files) {
        auto in = open_input(f);
        for (auto& d : read_trec_documents(in, f.string())) {
            if (!seen.insert(d.docno).second) throw LoadError("duplicate DOCNO " + d.docno + " in " + f.string());
            docs.push_back(std::move(d));
        }
    }
    if (docs.empty()) throw LoadError("no documents in " + path.string());
    return docs;
}

// --- index --------------------------------------------------------------------------

Index Index::build(const std::vector<Document>& docs, const Analyzer& analyzer) {
    Index idx;
    for (const auto& d : docs) {
        const auto id = static_cast<DocId>(idx.docnos_.size());
        if (!idx.doc_ids_.emplace(d.docno, id).second) throw LoadError("duplicate DOCNO " + d.docno);
        idx.docnos_.push_back(d.docno);
        auto terms = analyzer.terms(d.text);
        idx.doc_lengths_.push_back(terms.size());
        idx.total_tokens_ += terms.size();
        std::map<std::string, std::uint32_t> tf;
        for (auto& t : terms) ++tf[t];
        for (auto& [stem, n] : tf) {
            Entry& e = idx.postings_[stem];
            e.cf += n;
            e.postings.push_back({id, n});
        }
    }
    return idx;
}

std::optional<Index::DocId> Index::find_doc(std::string_view docno) const {
    auto it = doc_ids_.find(std::string(docno));
    if (it == doc_ids_.end()) return std::nullopt;
    return it->second;
}

std::span<const Index::Posting> Index::postings(std::string_view stem) const {
    auto it = postings_.find(std::string(stem));
    if (it == postings_.end()) return {};
    return it->second.postings;
}

std::uint64_t Index::collection_frequency(std::string_view stem) const {
    auto it = postings_.find(std::string(stem));
    return it == postings_.end() ? 0 : it->second.cf;
}

std::uint32_t Index::term_frequency(std::string_view stem, DocId d) const {
    auto list = postings(stem);
    auto it = std::lower_bound(list.begin(), list.end(), d, [](const Posting& p, DocId id) { return p.doc < id; });
    return it != list.end() && it->doc == d ? it->tf : 0;
}

std::vector<std::string> Index::vocabulary() const {
    std::vector<std::string> out;
    out.reserve(postings_.size());
    for (const auto& [stem, e] : postings_) out.push_back(stem);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

constexpr std::string_view index_magic = "lexiqx-index";
constexpr int index_version = 1;

}  // namespace

void Index::save(const fs::path& dir) const {
    fs::create_directories(dir);
    {
        std::ofstream meta(dir / "meta.txt");
        meta << index_magic << ' ' << index_version << '\n'
             << "docs " << docnos_.size() << '\n'
             << "tokens " << total_tokens_ << '\n'
             << "terms " << postings_.size() << '\n';
        if (!meta) throw LoadError("cannot write " + (dir / "meta.txt").string());
    }
    {
        std::ofstream docs(dir / "docs.tsv");
        for (std::size_t i = 0; i < docnos_.size(); ++i) docs << docnos_[i] << '\t' << doc_lengths_[i] << '\n';
        if (!docs) throw LoadError("cannot write " + (dir / "docs.tsv").string());
    }
    std::ofstream out(dir / "postings.tsv");
    for (const auto& stem : vocabulary()) {
        const Entry& e = postings_.at(stem);
        out << stem << '\t' << e.cf;
        for (const auto& p : e.postings) out << '\t' << p.doc << ':' << p.tf;
        out << '\n';
    }
    if (!out) throw LoadError("cannot write " + (dir / "postings.tsv").string());
}

Index Index::load(const fs::path& dir) {
    Index idx;
    std::size_t expected_docs = 0, expected_terms = 0;
    {
        const auto path = dir / "meta.txt";
        auto in = open_input(path);
        std::string magic, key;
        int version = 0;
        if (!(in >> magic >> version) || magic != index_magic) throw ParseError(path.string(), 1, "not an index");
        if (version != index_version) {
            throw ParseError(path.string(), 1, "unsupported index version " + std::to_string(version));
        }
        if (!(in >> key >> expected_docs) || key != "docs") throw ParseError(path.string(), 2, "expected docs");
        if (!(in >> key >> idx.total_tokens_) || key != "tokens") throw ParseError(path.string(), 3, "expected tokens");
        if (!(in >> key >> expected_terms) || key != "terms") throw ParseError(path.string(), 4, "expected terms");
    }
    {
        const auto path = dir / "docs.tsv";
        auto in = open_input(path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto fields = split(line, '\t');
            if (fields.size() != 2) throw ParseError(path.string(), lineno, "expected docno<TAB>length");
            const auto id = static_cast<DocId>(idx.docnos_.size());
            idx.docnos_.emplace_back(fields[0]);
            idx.doc_ids_.emplace(idx.docnos_.back(), id);
            idx.doc_lengths_.push_back(std::stoull(std::string(fields[1])));
        }
    }
    {
        const auto path = dir / "postings.tsv";
        auto in = open_input(path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto fields = split(line, '\t');
            if (fields.size() < 3) throw ParseError(path.string(), lineno, "expected stem, cf and postings");
            Entry e;
            try {
                e.cf = std::stoull(std::string(fields[1]));
                for (std::size_t i = 2; i < fields.size(); ++i) {
                    auto colon = fields[i].find(':');
                    if (colon == std::string_view::npos) throw std::invalid_argument("posting");
                    e.postings.push_back({static_cast<DocId>(std::stoul(std::string(fields[i].substr(0, colon)))),
                                          static_cast<std::uint32_t>(std::stoul(std::string(fields[i].substr(colon + 1))))});
                }
            } catch (const std::logic_error&) {
                throw ParseError(path.string(), lineno, "malformed posting list");
            }
            idx.postings_.emplace(std::string(fields[0]), std::move(e));
        }
    }
    if (idx.docnos_.size() != expected_docs || idx.postings_.size() != expected_terms) {
        throw LoadError("index in " + dir.string() + " does not match its metadata");
    }
    return idx;
}

bool operator==(const Index& a, const Index& b) {
    return a.docnos_ == b.docnos_ && a.doc_lengths_ == b.doc_lengths_ && a.total_tokens_ == b.total_tokens_ &&
           a.postings_ == b.postings_;
}

Index build_index(const fs::path& corpus, const Analyzer& analyzer) {
    return Index::build(load_trec_corpus(corpus), analyzer);
}

std::uint64_t IndexFrequencyProvider::frequency(std::string_view term) const {
    auto stems = analyzer_.terms(phrase_key(term));
    if (stems.empty()) return 0;
    std::vector<Index::DocId> docs;
    for (const auto& p : index_.postings(stems.front())) docs.push_back(p.doc);
    for (std::size_t i = 1; i < stems.size() && !docs.empty(); ++i) {
        std::vector<Index::DocId> next;
        for (Index::DocId d : docs) {
            if (index_.term_frequency(stems[i], d) > 0) next.push_back(d);
        }
        docs = std::move(next);
    }
    return docs.size();
}

// --- scoring ------------------------------------------------------------------------

void LmParams::validate() const {
    if (!(mu > 0.0)) throw ConfigError("mu must be positive");
    if (top_n < 1) throw ConfigError("top_n must be at least 1");
}

namespace {

struct ActiveTerm {
    std::span<const Index::Posting> postings;
    double background = 0.0;  // mu * cf / total
    double weight = 1.0;
};

template <typename Combine>
Run rank_documents(const Index& index, const std::string& qid, const std::vector<ActiveTerm>& terms,
                   const LmParams& params, Combine combine) {
    std::vector<Index::DocId> candidates;
    for (const auto& t : terms) {
        for (const auto& p : t.postings) candidates.push_back(p.doc);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<std::pair<double, Index::DocId>> scored;
    scored.reserve(candidates.size());
    for (Index::DocId d : candidates) {
        const double denominator = static_cast<double>(index.doc_length(d)) + params.mu;
        double score = 0.0;
        for (const auto& t : terms) {
            auto it = std::lower_bound(t.postings.begin(), t.postings.end(), d,
                                       [](const Index::Posting& p, Index::DocId id) { return p.doc < id; });
            const double tf = it != t.postings.end() && it->doc == d ? it->tf : 0.0;
            score += combine(t, std::log((tf + t.background) / denominator));
        }
        scored.emplace_back(score, d);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return index.docno(a.second) < index.docno(b.second);
    });
    if (scored.size() > static_cast<std::size_t>(params.top_n)) scored.resize(static_cast<std::size_t>(params.top_n));

    Run run;
    run.reserve(scored.size());
    int rank = 0;
    for (const auto& [score, d] : scored) run.push_back({qid, index.docno(d), ++rank, score});
    return run;
}

std::optional<ActiveTerm> activate(const Index& index, const std::string& stem, const LmParams& params) {
    const auto cf = index.collection_frequency(stem);
    if (cf == 0 || index.total_tokens() == 0) return std::nullopt;
    return ActiveTerm{index.postings(stem),
                      params.mu * (static_cast<double>(cf) / static_cast<double>(index.total_tokens()))};
}

}  // namespace

Run score_weighted_lm(const Index& index, const WeightedQuery& query, const LmParams& params) {
    params.validate();
    std::vector<ActiveTerm> terms;
    bool any_weight = false;
    for (const auto& t : query.terms) {
        if (t.weight < 0.0 || t.weight > 1.0 || std::isnan(t.weight)) {
            throw ConfigError("weight of '" + t.stem + "' in query " + query.qid + " is outside [0,1]");
        }
        if (t.weight == 0.0) continue;
        any_weight = true;
        if (auto a = activate(index, t.stem, params)) {
            a->weight = t.weight;
            terms.push_back(*a);
        }
    }
    if (!any_weight) {
        log_info("query " + query.qid + " has only zero weights; empty run");
        return {};
    }
    return rank_documents(index, query.qid, terms, params,
                          [](const ActiveTerm& t, double log_p) { return t.weight * log_p; });
}

Run score_lm(const Index& index, const std::string& qid, const std::vector<std::string>& stems,
             const LmParams& params) {
    params.validate();
    std::vector<ActiveTerm> terms;
    for (const auto& s : stems) {
        if (auto a = activate(index, s, params)) terms.push_back(*a);
    }
    return rank_documents(index, qid, terms, params, [](const ActiveTerm&, double log_p) { return log_p; });
}

// --- qrels, runs, topics ------------------------------------------------------------

Qrels read_qrels(std::istream& in, const std::string& name) {
    Qrels qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto f = split_whitespace(line);
        if (f.empty()) continue;
        if (f.size() != 4) throw ParseError(name, lineno, "expected 'qid iter docno rel'");
        int rel = 0;
        try {
            rel = std::stoi(std::string(f[3]));
        } catch (const std::logic_error&) {
            throw ParseError(name, lineno, "relevance is not an integer");
        }
        qrels[std::string(f[0])][std::string(f[2])] = rel;
    }
    return qrels;
}

Qrels load_qrels(const fs::path& path) {
    auto in = open_input(path);
    return read_qrels(in, path.string());
}

void write_run(const Run& run, std::ostream& out, std::string_view tag) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& e : run) out << e.qid << " Q0 " << e.docno << ' ' << e.rank << ' ' << e.score << ' ' << tag << '\n';
    out.flags(flags);
    out.precision(precision);
}

Run read_run(std::istream& in, const std::string& name) {
    Run run;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto f = split_whitespace(line);
        if (f.empty()) continue;
        if (f.size() != 6) throw ParseError(name, lineno, "expected 'qid Q0 docno rank score tag'");
        RunEntry e;
        e.qid = std::string(f[0]);
        e.docno = std::string(f[2]);
        try {
            e.rank = std::stoi(std::string(f[3]));
            e.score = std::stod(std::string(f[4]));
        } catch (const std::logic_error&) {
            throw ParseError(name, lineno, "bad rank or score");
        }
        run.push_back(std::move(e));
    }
    return run;
}

namespace {

std::string field_text(std::string_view block, std::string_view tag) {
    const std::string open = "<" + std::string(tag) + ">";
    auto start = block.find(open);
    if (start == std::string_view::npos) return {};
    start += open.size();
    auto end = block.find('<', start);
    auto value = block.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    std::string out;
    for (auto w : split_whitespace(value)) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

std::string drop_label(std::string value, std::string_view label) {
    if (value.rfind(label, 0) == 0) value = std::string(trim(std::string_view(value).substr(label.size())));
    return value;
}

}  // namespace

std::vector<Topic> read_topics(std::istream& in, const std::string& name) {
    const std::string text = slurp(in);
    std::vector<Topic> topics;
    std::size_t pos = 0;
    for (;;) {
        auto start = text.find("<top>", pos);
        if (start == std::string::npos) break;
        auto end = text.find("</top>", start);
        if (end == std::string::npos) throw ParseError(name, line_at(text, start), "unterminated <top>");
        std::string_view block(text.data() + start, end - start);
        Topic t;
        t.qid = drop_label(field_text(block, "num"), "Number:");
        t.title = drop_label(field_text(block, "title"), "Topic:");
        if (t.qid.empty()) throw ParseError(name, line_at(text, start), "topic without <num>");
        topics.push_back(std::move(t));
        pos = end + 6;
    }
    return topics;
}

std::vector<Topic> load_topics(const fs::path& path) {
    auto in = open_input(path);
    return read_topics(in, path.string());
}

// --- evaluation ---------------------------------------------------------------------

double average_precision(const Run& ranked, const std::map<std::string, int>& judgments) {
    const auto relevant = std::count_if(judgments.begin(), judgments.end(), [](const auto& j) { return j.second > 0; });
    if (relevant == 0) return 0.0;
    std::unordered_set<std::string> seen;
    double sum = 0.0;
    std::size_t hits = 0, rank = 0;
    for (const auto& e : ranked) {
        if (!seen.insert(e.docno).second) continue;
        ++rank;
        auto it = judgments.find(e.docno);
        if (it == judgments.end() || it->second <= 0) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(rank);
    }
    return sum / static_cast<double>(relevant);
}

EvalResult evaluate(const Run& run, const Qrels& qrels) {
    std::map<std::string, Run> by_query;
    for (const auto& e : run) by_query[e.qid].push_back(e);
    for (const auto& [qid, entries] : by_query) {
        if (!qrels.count(qid)) log_info("query " + qid + " has no judgments; excluded from evaluation");
    }

    EvalResult result;
    double sum = 0.0;
    for (const auto& [qid, judgments] : qrels) {
        if (std::none_of(judgments.begin(), judgments.end(), [](const auto& j) { return j.second > 0; })) continue;
        double ap = 0.0;
        if (auto it = by_query.find(qid); it != by_query.end()) {
            auto entries = it->second;
            std::stable_sort(entries.begin(), entries.end(),
                             [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
            ap = average_precision(entries, judgments);
        }
        result.ap[qid] = ap;
        sum += ap;
    }
    if (!result.ap.empty()) result.map = sum / static_cast<double>(result.ap.size());
    return result;
}

double mean_average_precision(const Run& run, const Qrels& qrels) { return evaluate(run, qrels).map; }

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("paired t-test needs lists of equal length");
    if (a.size() < 2) throw ConfigError("paired t-test needs at least two pairs");
    TTestResult r;
    r.n = a.size();
    const double n = static_cast<double>(r.n);
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    r.mean_difference = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : d) ss += (x - r.mean_difference) * (x - r.mean_difference);
    const double sd = std::sqrt(ss / (n - 1.0));

    if (sd == 0.0) {
        if (r.mean_difference == 0.0) return r;
        r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
        r.p = 0.0;
        r.significant = true;
        log_info("paired t-test: constant non-zero differences, reported as significant");
        return r;
    }
    r.t = r.mean_difference / (sd / std::sqrt(n));
    boost::math::students_t dist(n - 1.0);
    r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
    r.significant = r.p < 0.05;
    return r;
}

}  // namespace lexiqx
