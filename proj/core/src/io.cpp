#include "anderson/io.hpp"

#include <sstream>

namespace anderson {

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Cursor(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& what) const {
        raise(Errc::parse_error,
              what + " at line " + std::to_string(line) + ", column " + std::to_string(col));
    }
    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_space_and_comments() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }
    void skip_inline_space() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) advance();
    }
    std::string word() {
        skip_inline_space();
        size_t start = pos;
        while (!eof() && !isspace(static_cast<unsigned char>(peek()))) advance();
        if (pos == start) fail("expected a token");
        return text.substr(start, pos - start);
    }
    int64_t integer() {
        std::string w = word();
        try {
            size_t used = 0;
            int64_t v = std::stoll(w, &used);
            if (used != w.size()) fail("malformed integer '" + w + "'");
            return v;
        } catch (const std::exception&) {
            fail("malformed integer '" + w + "'");
        }
    }
};

std::vector<uint64_t> parse_bracket_list(Cursor& cur) {
    cur.skip_inline_space();
    if (cur.eof() || cur.peek() != '[') cur.fail("expected '['");
    cur.advance();
    std::vector<uint64_t> vals;
    std::string num;
    while (true) {
        if (cur.eof()) cur.fail("unterminated entry");
        char c = cur.peek();
        if (c == ',' || c == ']') {
            if (num.empty()) cur.fail("empty coefficient");
            try {
                vals.push_back(std::stoull(num));
            } catch (const std::exception&) {
                cur.fail("malformed coefficient '" + num + "'");
            }
            num.clear();
            cur.advance();
            if (c == ']') break;
        } else if (isdigit(static_cast<unsigned char>(c))) {
            num.push_back(c);
            cur.advance();
        } else {
            cur.fail(std::string("unexpected character '") + c + "' in entry");
        }
    }
    return vals;
}

} // namespace

Motive parse_motive(const std::string& text) {
    Cursor cur(text);
    auto expect_key = [&](const char* key) {
        cur.skip_space_and_comments();
        std::string w = cur.word();
        if (w != key) cur.fail(std::string("expected '") + key + "', found '" + w + "'");
    };
    expect_key("q");
    int64_t q = cur.integer();
    expect_key("e");
    int64_t e = cur.integer();
    if (e < 1) cur.fail("e must be positive");
    expect_key("theta");
    int64_t theta_enc = cur.integer();
    expect_key("r");
    int64_t r = cur.integer();
    if (r < 1) cur.fail("rank must be positive");

    // resolve the base field; q validation surfaces as a parse error here
    int64_t p = 2;
    {
        int64_t v = q;
        if (v < 2) cur.fail("q must be at least 2");
        int64_t dd = 2;
        while (dd * dd <= v && v % dd) ++dd;
        p = (dd * dd <= v) ? dd : v;
        while (v > 1) {
            if (v % p) cur.fail("q is not a prime power");
            v /= p;
        }
    }
    int a = 0;
    for (int64_t v = q; v > 1; v /= p) ++a;
    const FieldDescriptor* L = fields::get(p, a * static_cast<int>(e));
    if (theta_enc < 0 || static_cast<uint64_t>(theta_enc) >= L->card_small())
        cur.fail("theta encoding out of range");
    FieldElement theta = FieldElement::from_encoding(L, static_cast<uint64_t>(theta_enc));

    PolyMat T(L, static_cast<int>(r), static_cast<int>(r));
    for (int i = 0; i < r; ++i) {
        expect_key("row");
        for (int j = 0; j < r; ++j) {
            std::vector<uint64_t> enc = parse_bracket_list(cur);
            for (uint64_t v : enc)
                if (v >= L->card_small()) cur.fail("entry coefficient out of range");
            T.at(i, j) = Poly::from_encodings(L, enc);
            if (j + 1 < r) {
                cur.skip_inline_space();
                if (cur.eof() || cur.peek() != ';') cur.fail("expected ';' between entries");
                cur.advance();
            }
        }
    }
    cur.skip_space_and_comments();
    if (!cur.eof()) cur.fail("trailing content after the matrix");
    return Motive(q, static_cast<int>(e), theta, T);
}

namespace {

std::string entry_str(const Poly& a) {
    std::ostringstream os;
    os << "[";
    int top = std::max(a.deg(), 0);
    for (int i = 0; i <= top; ++i) {
        if (i) os << ",";
        os << a.coeff(i).encoding();
    }
    os << "]";
    return os.str();
}

} // namespace

std::string serialize_motive(const Motive& m) {
    std::ostringstream os;
    os << "q " << m.q() << "\n";
    os << "e " << m.e() << "\n";
    os << "theta " << m.theta().encoding() << "\n";
    os << "r " << m.rank() << "\n";
    for (int i = 0; i < m.rank(); ++i) {
        os << "row ";
        for (int j = 0; j < m.rank(); ++j) {
            if (j) os << ";";
            os << entry_str(m.tau().at(i, j));
        }
        os << "\n";
    }
    return os.str();
}

Place parse_place(const std::string& text, const FieldDescriptor* fq) {
    if (text == "inf") return Place::at_infinity(fq);
    Cursor cur(text);
    std::vector<uint64_t> enc = parse_bracket_list(cur);
    for (uint64_t v : enc)
        if (v >= fq->card_small()) cur.fail("place coefficient out of range");
    Poly prime = Poly::from_encodings(fq, enc);
    if (!prime.is_monic() || prime.deg() < 1)
        raise(Errc::parse_error, "place polynomial must be monic of positive degree");
    if (!is_irreducible(prime)) raise(Errc::parse_error, "place polynomial must be irreducible");
    return Place::finite(prime);
}

std::string serialize_place(const Place& p) {
    if (p.infinite) return "inf";
    return entry_str(p.prime);
}

} // namespace anderson
