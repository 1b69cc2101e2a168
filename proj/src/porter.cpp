#include "lexiqx/porter.hpp"

#include "lexiqx/text.hpp"

namespace lexiqx {
namespace {

// Works on b[0..k]; j marks the end of the stem once ends() matched.
class Stemmer {
  public:
    explicit Stemmer(std::string_view word) : b_(word), k_(static_cast<int>(word.size()) - 1) {}

    std::string run() {
        if (k_ <= 1) return b_;
        step1ab();
        if (k_ > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        return b_.substr(0, static_cast<std::size_t>(k_ + 1));
    }

  private:
    bool cons(int i) const {
        switch (b_[static_cast<std::size_t>(i)]) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 ? true : !cons(i - 1);
            default: return true;
        }
    }

    // Number of consonant-vowel sequences in b[0..j].
    int m() const {
        int n = 0;
        int i = 0;
        for (;;) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool double_consonant(int j) const {
        if (j < 1) return false;
        if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j - 1)]) return false;
        return cons(j);
    }

    // consonant-vowel-consonant ending at i, last consonant not w, x or y
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = b_[static_cast<std::size_t>(i)];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
        int len = static_cast<int>(s.size());
        if (len > k_ + 1) return false;
        if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s)
            return false;
        j_ = k_ - len;
        return true;
    }

    void set_to(std::string_view s) {
        b_.replace(static_cast<std::size_t>(j_ + 1), std::string::npos, s);
        k_ = j_ + static_cast<int>(s.size());
    }

    void replace_if_measure(std::string_view s) {
        if (m() > 0) set_to(s);
    }

    char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

    void step1ab() {
        if (at(k_) == 's') {
            if (ends("sses")) {
                k_ -= 2;
            } else if (ends("ies")) {
                set_to("i");
            } else if (at(k_ - 1) != 's') {
                --k_;
            }
        }
        if (ends("eed")) {
            if (m() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_consonant(k_)) {
                --k_;
                char ch = at(k_);
                if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
            } else if (j_ = k_, m() == 1 && cvc(k_)) {
                set_to("e");
            }
        }
        b_.resize(static_cast<std::size_t>(k_ + 1));
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    template <std::size_t N>
    void apply_first(const Rule (&rules)[N]) {
        for (const auto& rule : rules) {
            if (ends(rule.suffix)) {
                replace_if_measure(rule.replacement);
                return;
            }
        }
    }

    void step2() {
        switch (at(k_ - 1)) {
            case 'a': apply_first({Rule{"ational", "ate"}, Rule{"tional", "tion"}}); break;
            case 'c': apply_first({Rule{"enci", "ence"}, Rule{"anci", "ance"}}); break;
            case 'e': apply_first({Rule{"izer", "ize"}}); break;
            case 'l':
                apply_first({Rule{"bli", "ble"}, Rule{"alli", "al"}, Rule{"entli", "ent"},
                             Rule{"eli", "e"}, Rule{"ousli", "ous"}});
                break;
            case 'o':
                apply_first({Rule{"ization", "ize"}, Rule{"ation", "ate"}, Rule{"ator", "ate"}});
                break;
            case 's':
                apply_first({Rule{"alism", "al"}, Rule{"iveness", "ive"}, Rule{"fulness", "ful"},
                             Rule{"ousness", "ous"}});
                break;
            case 't':
                apply_first({Rule{"aliti", "al"}, Rule{"iviti", "ive"}, Rule{"biliti", "ble"}});
                break;
            case 'g': apply_first({Rule{"logi", "log"}}); break;
            default: break;
        }
    }

    void step3() {
        switch (at(k_)) {
            case 'e':
                apply_first({Rule{"icate", "ic"}, Rule{"ative", ""}, Rule{"alize", "al"}});
                break;
            case 'i': apply_first({Rule{"iciti", "ic"}}); break;
            case 'l': apply_first({Rule{"ical", "ic"}, Rule{"ful", ""}}); break;
            case 's': apply_first({Rule{"ness", ""}}); break;
            default: break;
        }
    }

    void step4() {
        bool matched = false;
        switch (at(k_ - 1)) {
            case 'a': matched = ends("al"); break;
            case 'c': matched = ends("ance") || ends("ence"); break;
            case 'e': matched = ends("er"); break;
            case 'i': matched = ends("ic"); break;
            case 'l': matched = ends("able") || ends("ible"); break;
            case 'n': matched = ends("ant") || ends("ement") || ends("ment") || ends("ent"); break;
            case 'o':
                matched = (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) || ends("ou");
                break;
            case 's': matched = ends("ism"); break;
            case 't': matched = ends("ate") || ends("iti"); break;
            case 'u': matched = ends("ous"); break;
            case 'v': matched = ends("ive"); break;
            case 'z': matched = ends("ize"); break;
            default: break;
        }
        if (matched && m() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (at(k_) == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
        }
        if (at(k_) == 'l' && double_consonant(k_) && m() > 1) --k_;
    }

    std::string b_;
    int k_;
    int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

std::string term_stem(std::string_view term) {
    const std::string joined = underscore_form(term);
    std::string out;
    for (auto part : split(joined, '_')) {
        if (part.empty()) continue;
        if (!out.empty()) out.push_back('_');
        out += porter_stem(part);
    }
    return out;
}

}  // namespace lexiqx
