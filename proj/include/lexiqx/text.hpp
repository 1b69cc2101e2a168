#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexiqx {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string_view> split(std::string_view s, char delim);

/// Splits on runs of ASCII whitespace, dropping empty fields.
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Lowercases and splits on anything that is not an ASCII letter or digit.
/// Underscores separate words, so "insider_trading" yields two words.
std::vector<std::string> word_tokens(std::string_view text);

/// Canonical key for a possibly-multiword term: lowercase, with spaces and
/// underscores both mapped to a single space.
std::string phrase_key(std::string_view term);

/// Lowercase, underscore-joined form of a possibly-multiword term.
std::string underscore_form(std::string_view term);

/// Function-word list shared by the indexer and the gloss-overlap matcher.
class StopList {
  public:
    StopList() = default;
    explicit StopList(std::vector<std::string> words);

    /// The shipped English list.
    static const StopList& english();
    static StopList from_file(const std::filesystem::path& path);

    bool contains(std::string_view word) const;
    void add(std::string_view word);
    std::size_t size() const noexcept { return words_.size(); }

  private:
    std::unordered_set<std::string> words_;
};

}  // namespace lexiqx
