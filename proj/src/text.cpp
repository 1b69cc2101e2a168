#include "lexiqx/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "lexiqx/error.hpp"

namespace lexiqx {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

std::string phrase_key(std::string_view term) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : term) {
        if (c == '_' || std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string underscore_form(std::string_view term) {
    std::string key = phrase_key(term);
    std::replace(key.begin(), key.end(), ' ', '_');
    return key;
}

StopList::StopList(std::vector<std::string> words) {
    for (auto& w : words) words_.insert(to_lower(w));
}

const StopList& StopList::english() {
    // Standard English function words (articles, pronouns, auxiliaries,
    // prepositions, conjunctions, common adverbs).
    static const StopList list({
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
        "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
        "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing",
        "down", "during", "each", "etc", "few", "for", "from", "further", "had", "has",
        "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
        "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
        "may", "me", "might", "more", "most", "must", "my", "myself", "no", "nor",
        "not", "now", "of", "off", "on", "once", "only", "or", "other", "ought",
        "our", "ours", "ourselves", "out", "over", "own", "same", "shall", "she", "should",
        "so", "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "through", "to", "too", "under",
        "until", "up", "upon", "us", "very", "was", "we", "were", "what", "when",
        "where", "whether", "which", "while", "who", "whom", "whose", "why", "will", "with",
        "within", "without", "would", "you", "your", "yours", "yourself", "yourselves", "s", "t",
        "e", "g", "ie", "eg", "one", "ones", "something", "someone", "usually", "especially",
    });
    return list;
}

StopList StopList::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open stop list " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto w = trim(line);
        if (w.empty() || w.front() == '#') continue;
        words.emplace_back(w);
    }
    return StopList(std::move(words));
}

bool StopList::contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
}

void StopList::add(std::string_view word) { words_.insert(to_lower(word)); }

}  // namespace lexiqx
