#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexiqx/lexicon.hpp"
#include "lexiqx/text.hpp"

namespace lexiqx {

/// Lowercase, split on non-alphanumerics, drop stop words, Porter-stem.
class Analyzer {
  public:
    explicit Analyzer(const StopList& stop = StopList::english()) : stop_(&stop) {}

    std::vector<std::string> terms(std::string_view text) const;

  private:
    const StopList* stop_;
};

struct Document {
    std::string docno;
    std::string text;
};

/// Parses <DOC><DOCNO>..</DOCNO>..<TEXT>..</TEXT></DOC> envelopes. Text of
/// every <TEXT> block is concatenated; a document without one is empty.
std::vector<Document> read_trec_documents(std::istream& in, const std::string& name = "<stream>");

/// Reads every regular file of a directory in name order (or a single
/// file). Throws LoadError when nothing is found and ParseError on a
/// duplicate DOCNO.
std::vector<Document> load_trec_corpus(const std::filesystem::path& path);

class Index {
  public:
    using DocId = std::uint32_t;

    struct Posting {
        DocId doc = 0;
        std::uint32_t tf = 0;

        friend bool operator==(const Posting&, const Posting&) = default;
    };

    static Index build(const std::vector<Document>& docs, const Analyzer& analyzer = Analyzer());

    std::size_t doc_count() const noexcept { return docnos_.size(); }
    const std::string& docno(DocId d) const { return docnos_.at(d); }
    std::optional<DocId> find_doc(std::string_view docno) const;
    std::uint64_t doc_length(DocId d) const { return doc_lengths_.at(d); }
    std::uint64_t total_tokens() const noexcept { return total_tokens_; }

    /// Sorted by doc id; empty for unseen stems.
    std::span<const Posting> postings(std::string_view stem) const;
    std::uint64_t collection_frequency(std::string_view stem) const;
    std::size_t document_frequency(std::string_view stem) const { return postings(stem).size(); }
    std::uint32_t term_frequency(std::string_view stem, DocId d) const;
    std::size_t vocabulary_size() const noexcept { return postings_.size(); }
    std::vector<std::string> vocabulary() const;

    /// Writes meta, docs.tsv and postings.tsv into `dir`, creating it.
    void save(const std::filesystem::path& dir) const;
    static Index load(const std::filesystem::path& dir);

    friend bool operator==(const Index& a, const Index& b);

  private:
    struct Entry {
        std::uint64_t cf = 0;
        std::vector<Posting> postings;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    std::vector<std::string> docnos_;
    std::vector<std::uint64_t> doc_lengths_;
    std::unordered_map<std::string, DocId> doc_ids_;
    std::unordered_map<std::string, Entry> postings_;
    std::uint64_t total_tokens_ = 0;
};

Index build_index(const std::filesystem::path& corpus, const Analyzer& analyzer = Analyzer());

/// Document frequency from an index. Multiword terms count documents
/// containing every component stem.
class IndexFrequencyProvider final : public FrequencyProvider {
  public:
    IndexFrequencyProvider(const Index& index, const Analyzer& analyzer = Analyzer())
        : index_(index), analyzer_(analyzer) {}

    std::uint64_t frequency(std::string_view term) const override;

  private:
    const Index& index_;
    Analyzer analyzer_;
};

struct WeightedTerm {
    std::string stem;
    double weight = 1.0;
};

struct WeightedQuery {
    std::string qid;
    std::vector<WeightedTerm> terms;
};

struct RunEntry {
    std::string qid;
    std::string docno;
    int rank = 0;
    double score = 0.0;

    friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

using Run = std::vector<RunEntry>;

struct LmParams {
    double mu = 2000.0;
    int top_n = 1000;

    void validate() const;
};

/// Dirichlet-smoothed query likelihood, each term's log-probability scaled
/// by its weight. Only documents containing an active term are scored;
/// terms with weight 0 or absent from the collection are inactive. Sorted
/// by score descending, then docno.
Run score_weighted_lm(const Index& index, const WeightedQuery& query, const LmParams& params = {});

/// The same model without weights.
Run score_lm(const Index& index, const std::string& qid, const std::vector<std::string>& stems,
             const LmParams& params = {});

/// qid -> docno -> relevance grade; grades above 0 count as relevant.
using Qrels = std::map<std::string, std::map<std::string, int>>;

Qrels read_qrels(std::istream& in, const std::string& name = "<stream>");
Qrels load_qrels(const std::filesystem::path& path);

/// `qid Q0 docno rank score tag`
void write_run(const Run& run, std::ostream& out, std::string_view tag = "lexiqx");
Run read_run(std::istream& in, const std::string& name = "<stream>");

struct Topic {
    std::string qid;
    std::string title;
};

/// TREC <top> blocks with <num> and <title> fields.
std::vector<Topic> read_topics(std::istream& in, const std::string& name = "<stream>");
std::vector<Topic> load_topics(const std::filesystem::path& path);

/// Entries of one query in rank order against that query's judgments.
double average_precision(const Run& ranked, const std::map<std::string, int>& judgments);

struct EvalResult {
    std::map<std::string, double> ap;
    double map = 0.0;
};

/// Averages over every qrels query with a relevant document; a query absent
/// from the run scores 0. Run queries without judgments are skipped.
EvalResult evaluate(const Run& run, const Qrels& qrels);
double mean_average_precision(const Run& run, const Qrels& qrels);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    bool significant = false;
    std::size_t n = 0;
    double mean_difference = 0.0;
};

/// Two-tailed paired t-test on a - b; significant when p < 0.05.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace lexiqx
