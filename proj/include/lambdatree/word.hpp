#pragma once

#include "lambdatree/lex_value.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

namespace lambdatree {

/// A syllable g^exp of a group word; generator ids are global to a construction.
struct Letter
{
    int gen = 0;
    long exp = 1;

    friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// A group word stored as syllables; `reduce` merges adjacent syllables.
using Word = std::vector<Letter>;

inline void push_letter(Word& w, Letter l)
{
    if (l.exp == 0) return;
    if (!w.empty() && w.back().gen == l.gen) {
        w.back().exp += l.exp;
        if (w.back().exp == 0) w.pop_back();
    } else {
        w.push_back(l);
    }
}

inline Word reduce(const Word& w)
{
    Word out;
    for (const auto& l : w) push_letter(out, l);
    return out;
}

inline Word concat(const Word& a, const Word& b)
{
    Word out = a;
    for (const auto& l : b) push_letter(out, l);
    return out;
}

inline Word inverse(const Word& w)
{
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) push_letter(out, {it->gen, -it->exp});
    return out;
}

inline Word power(const Word& w, long k)
{
    Word base = k < 0 ? inverse(w) : w;
    Word out;
    for (long i = 0; i < std::labs(k); ++i) out = concat(out, base);
    return out;
}

inline long word_length(const Word& w)
{
    long n = 0;
    for (const auto& l : w) n += std::labs(l.exp);
    return n;
}

/// Generator names, shared by every group built over one construction.
class Alphabet
{
  public:
    int add(const std::string& name)
    {
        if (auto it = ids_.find(name); it != ids_.end()) return it->second;
        int id = static_cast<int>(names_.size());
        names_.push_back(name);
        ids_[name] = id;
        return id;
    }

    int id(const std::string& name) const
    {
        auto it = ids_.find(name);
        if (it == ids_.end()) throw Error("unknown generator '" + name + "'");
        return it->second;
    }

    bool has(const std::string& name) const { return ids_.count(name) != 0; }

    const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const { return names_.size(); }

    /// Letter-exponent notation, e.g. `a^2*b^-1`; the identity prints as `1`.
    std::string format(const Word& w) const
    {
        if (w.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += '*';
            out += name(w[i].gen);
            if (w[i].exp != 1) out += "^" + std::to_string(w[i].exp);
        }
        return out;
    }

    Word parse(const std::string& text) const
    {
        Word w;
        std::string s;
        for (char c : text)
            if (c != ' ') s += c;
        if (s.empty() || s == "1") return w;
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t end = s.find('*', pos);
            std::string tok = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            pos = end == std::string::npos ? s.size() : end + 1;
            long exp = 1;
            std::string gen = tok;
            if (auto caret = tok.find('^'); caret != std::string::npos) {
                gen = tok.substr(0, caret);
                try {
                    exp = std::stol(tok.substr(caret + 1));
                } catch (const std::exception&) {
                    throw Error("malformed exponent in word '" + text + "'");
                }
            }
            push_letter(w, {id(gen), exp});
        }
        return w;
    }

  private:
    std::vector<std::string> names_;
    std::map<std::string, int> ids_;
};

/// All freely reduced words of length 1..radius over `gens` and their inverses,
/// in shortlex order (letters ordered g0, g0^-1, g1, g1^-1, ...).
inline std::vector<Word> word_ball(const std::vector<int>& gens, long radius)
{
    std::vector<Letter> letters;
    for (int g : gens) {
        letters.push_back({g, 1});
        letters.push_back({g, -1});
    }
    std::vector<Word> out;
    std::vector<std::vector<Letter>> level{{}};
    for (long len = 1; len <= radius; ++len) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : level)
            for (const auto& l : letters) {
                if (!w.empty() && w.back().gen == l.gen && w.back().exp == -l.exp) continue;
                auto v = w;
                v.push_back(l);
                next.push_back(std::move(v));
            }
        for (const auto& w : next) {
            Word merged;
            for (const auto& l : w) push_letter(merged, l);
            out.push_back(std::move(merged));
        }
        level = std::move(next);
    }
    return out;
}

}  // namespace lambdatree
