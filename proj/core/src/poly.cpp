#include "anderson/poly.hpp"

#include <sstream>

namespace anderson {

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly::Poly(const FieldDescriptor* fd, std::vector<FieldElement> coeffs) : fd_(fd), c_(std::move(coeffs)) {
    trim();
}

Poly Poly::constant(const FieldElement& c) {
    Poly r(c.field());
    if (!c.is_zero()) r.c_.push_back(c);
    return r;
}

Poly Poly::x(const FieldDescriptor* fd) {
    Poly r(fd);
    r.c_ = {FieldElement::zero(fd), FieldElement::one(fd)};
    return r;
}

Poly Poly::from_encodings(const FieldDescriptor* fd, const std::vector<uint64_t>& enc) {
    std::vector<FieldElement> c;
    c.reserve(enc.size());
    for (uint64_t e : enc) c.push_back(FieldElement::from_encoding(fd, e));
    return Poly(fd, std::move(c));
}

bool Poly::is_one() const { return c_.size() == 1 && c_[0].is_one(); }

bool Poly::is_monic() const { return !c_.empty() && c_.back().is_one(); }

FieldElement Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return FieldElement::zero(fd_);
    return c_[static_cast<size_t>(i)];
}

FieldElement Poly::lead() const {
    internal_check(!c_.empty(), "lead of zero polynomial");
    return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    Poly r(fd_);
    size_t n = std::max(c_.size(), o.c_.size());
    r.c_.reserve(n);
    for (size_t i = 0; i < n; ++i) r.c_.push_back(coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i)));
    r.trim();
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    Poly r(fd_);
    size_t n = std::max(c_.size(), o.c_.size());
    r.c_.reserve(n);
    for (size_t i = 0; i < n; ++i) r.c_.push_back(coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i)));
    r.trim();
    return r;
}

Poly Poly::operator-() const {
    Poly r(fd_);
    r.c_.reserve(c_.size());
    for (const auto& a : c_) r.c_.push_back(-a);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    if (is_zero() || o.is_zero()) return Poly(fd_);
    Poly r(fd_);
    r.c_.assign(c_.size() + o.c_.size() - 1, FieldElement::zero(fd_));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
    }
    r.trim();
    return r;
}

Poly Poly::operator*(const FieldElement& c) const {
    if (c.is_zero()) return Poly(fd_);
    Poly r(fd_);
    r.c_.reserve(c_.size());
    for (const auto& a : c_) r.c_.push_back(a * c);
    r.trim();
    return r;
}

Poly Poly::shifted(int k) const {
    if (is_zero()) return *this;
    Poly r(fd_);
    r.c_.assign(static_cast<size_t>(k), FieldElement::zero(fd_));
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
}

std::string Poly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = deg(); i >= 0; --i) {
        const FieldElement& a = c_[static_cast<size_t>(i)];
        if (a.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || !a.is_one()) os << a.str();
        if (i > 0) {
            if (!a.is_one()) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    internal_check(!b.is_zero(), "division by zero polynomial");
    const FieldDescriptor* fd = a.field();
    if (a.deg() < b.deg()) return {Poly(fd), a};
    FieldElement linv = b.lead().inv();
    std::vector<FieldElement> r(a.coeffs());
    std::vector<FieldElement> q(static_cast<size_t>(a.deg() - b.deg() + 1), FieldElement::zero(fd));
    for (int k = a.deg() - b.deg(); k >= 0; --k) {
        FieldElement c = r[static_cast<size_t>(k + b.deg())] * linv;
        q[static_cast<size_t>(k)] = c;
        if (c.is_zero()) continue;
        for (int i = 0; i <= b.deg(); ++i)
            r[static_cast<size_t>(k + i)] = r[static_cast<size_t>(k + i)] - c * b.coeff(i);
    }
    r.resize(static_cast<size_t>(std::max(b.deg(), 0)), FieldElement::zero(fd));
    return {Poly(fd, std::move(q)), Poly(fd, std::move(r))};
}

Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divrem(a, b);
    internal_check(r.is_zero(), "inexact polynomial division");
    return q;
}

Poly gcd_monic(const Poly& a, const Poly& b) {
    Poly u = a, v = b;
    while (!v.is_zero()) {
        Poly r = divrem(u, v).second;
        u = v;
        v = r;
    }
    if (u.is_zero()) return u;
    return monic(u);
}

void xgcd(const Poly& a, const Poly& b, Poly& g, Poly& s, Poly& t) {
    const FieldDescriptor* fd = a.field();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::one(fd), s1 = Poly::zero(fd);
    Poly t0 = Poly::zero(fd), t1 = Poly::one(fd);
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        r0 = r1; r1 = r;
        Poly s2 = s0 - q * s1;
        s0 = s1; s1 = s2;
        Poly t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    internal_check(!r0.is_zero(), "xgcd of zero polynomials");
    FieldElement linv = r0.lead().inv();
    g = r0 * linv;
    s = s0 * linv;
    t = t0 * linv;
}

Poly derivative(const Poly& a) {
    const FieldDescriptor* fd = a.field();
    if (a.deg() <= 0) return Poly(fd);
    std::vector<FieldElement> c;
    c.reserve(static_cast<size_t>(a.deg()));
    for (int i = 1; i <= a.deg(); ++i) {
        // i * a_i computed as a prime-field scalar
        int64_t m = i % fd->p;
        FieldElement s = FieldElement::from_encoding(fd, static_cast<uint64_t>(m));
        c.push_back(a.coeff(i) * s);
    }
    return Poly(fd, std::move(c));
}

FieldElement eval(const Poly& a, const FieldElement& x) {
    FieldElement acc = FieldElement::zero(x.field());
    for (int i = a.deg(); i >= 0; --i) acc = acc * x + a.coeff(i);
    return acc;
}

Poly monic(const Poly& a) {
    internal_check(!a.is_zero(), "monic of zero");
    if (a.is_monic()) return a;
    return a * a.lead().inv();
}

Poly pow_mod(const Poly& base, uint64_t e, const Poly& mod) {
    Poly acc = Poly::one(base.field());
    Poly b = divrem(base, mod).second;
    while (e) {
        if (e & 1) acc = divrem(acc * b, mod).second;
        b = divrem(b * b, mod).second;
        e >>= 1;
    }
    return acc;
}

Poly pth_power(const Poly& a) {
    const FieldDescriptor* fd = a.field();
    if (a.is_zero()) return a;
    std::vector<FieldElement> c(static_cast<size_t>(a.deg()) * static_cast<size_t>(fd->p) + 1,
                                FieldElement::zero(fd));
    for (int i = 0; i <= a.deg(); ++i)
        c[static_cast<size_t>(i) * static_cast<size_t>(fd->p)] = a.coeff(i).frobenius();
    return Poly(fd, std::move(c));
}

Poly compose(const Poly& a, const Poly& b) {
    Poly acc = Poly::zero(a.field());
    for (int i = a.deg(); i >= 0; --i) acc = acc * b + Poly::constant(a.coeff(i));
    return acc;
}

Poly taylor_shift(const Poly& a, const FieldElement& c) {
    Poly xc = Poly::x(a.field()) + Poly::constant(c);
    return compose(a, xc);
}

Poly sigma_q(const Poly& a, int qa) {
    std::vector<FieldElement> c;
    c.reserve(a.coeffs().size());
    for (const auto& v : a.coeffs()) c.push_back(v.pow_p_iterated(qa));
    return Poly(a.field(), std::move(c));
}

int valuation(const Poly& a, const Poly& prime) {
    internal_check(!a.is_zero(), "valuation of zero");
    int v = 0;
    Poly r = a;
    while (true) {
        auto [q, rem] = divrem(r, prime);
        if (!rem.is_zero()) return v;
        r = q;
        ++v;
    }
}

Poly map_into(const Poly& a, const FieldDescriptor* target) {
    std::vector<FieldElement> c;
    c.reserve(a.coeffs().size());
    for (const auto& v : a.coeffs()) c.push_back(fields::embed(v, target));
    return Poly(target, std::move(c));
}

std::optional<Poly> project_poly(const Poly& a, const FieldDescriptor* sub) {
    std::vector<FieldElement> c;
    c.reserve(a.coeffs().size());
    for (const auto& v : a.coeffs()) {
        auto pr = fields::project(v, sub);
        if (!pr) return std::nullopt;
        c.push_back(*pr);
    }
    return Poly(sub, std::move(c));
}

// ---------------- XPoly ----------------

void XPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

XPoly::XPoly(const FieldDescriptor* fd, std::vector<Poly> coeffs) : fd_(fd), c_(std::move(coeffs)) {
    trim();
}

XPoly XPoly::constant(const Poly& c) {
    XPoly r(c.field());
    if (!c.is_zero()) r.c_.push_back(c);
    return r;
}

XPoly XPoly::one(const FieldDescriptor* fd) { return constant(Poly::one(fd)); }

XPoly XPoly::x(const FieldDescriptor* fd) {
    XPoly r(fd);
    r.c_ = {Poly::zero(fd), Poly::one(fd)};
    return r;
}

int XPoly::deg_t() const {
    int d = -1;
    for (const auto& c : c_) d = std::max(d, c.deg());
    return d;
}

Poly XPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Poly::zero(fd_);
    return c_[static_cast<size_t>(i)];
}

Poly XPoly::lead() const {
    internal_check(!c_.empty(), "lead of zero");
    return c_.back();
}

bool XPoly::is_monic() const { return !c_.empty() && c_.back().is_one(); }

XPoly XPoly::operator+(const XPoly& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    XPoly r(fd_);
    size_t n = std::max(c_.size(), o.c_.size());
    for (size_t i = 0; i < n; ++i) r.c_.push_back(coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i)));
    r.trim();
    return r;
}

XPoly XPoly::operator-(const XPoly& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    XPoly r(fd_);
    size_t n = std::max(c_.size(), o.c_.size());
    for (size_t i = 0; i < n; ++i) r.c_.push_back(coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i)));
    r.trim();
    return r;
}

XPoly XPoly::operator-() const {
    XPoly r(fd_);
    for (const auto& a : c_) r.c_.push_back(-a);
    return r;
}

XPoly XPoly::operator*(const XPoly& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    if (is_zero() || o.is_zero()) return XPoly(fd_);
    XPoly r(fd_);
    r.c_.assign(c_.size() + o.c_.size() - 1, Poly::zero(fd_));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
    }
    r.trim();
    return r;
}

XPoly XPoly::operator*(const Poly& c) const {
    XPoly r(fd_);
    for (const auto& a : c_) r.c_.push_back(a * c);
    r.trim();
    return r;
}

std::string XPoly::str(const std::string& xv, const std::string& tv) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = deg(); i >= 0; --i) {
        const Poly& a = c_[static_cast<size_t>(i)];
        if (a.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        bool needs_paren = a.deg() > 0 && i > 0 && a.coeffs().size() > 1;
        // count nonzero terms for parenthesization
        int nz = 0;
        for (const auto& v : a.coeffs())
            if (!v.is_zero()) ++nz;
        needs_paren = i > 0 && (nz > 1);
        if (i == 0 || !a.is_one()) {
            if (needs_paren) os << "(";
            os << a.str(tv);
            if (needs_paren) os << ")";
        }
        if (i > 0) {
            if (!a.is_one()) os << "*";
            os << xv;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::pair<XPoly, XPoly> divrem_monic(const XPoly& a, const XPoly& b) {
    internal_check(b.is_monic(), "divisor must be monic in x");
    const FieldDescriptor* fd = a.field();
    if (a.deg() < b.deg()) return {XPoly(fd), a};
    std::vector<Poly> r(a.coeffs());
    std::vector<Poly> q(static_cast<size_t>(a.deg() - b.deg() + 1), Poly::zero(fd));
    for (int k = a.deg() - b.deg(); k >= 0; --k) {
        Poly c = r[static_cast<size_t>(k + b.deg())];
        q[static_cast<size_t>(k)] = c;
        if (c.is_zero()) continue;
        for (int i = 0; i <= b.deg(); ++i)
            r[static_cast<size_t>(k + i)] = r[static_cast<size_t>(k + i)] - c * b.coeff(i);
    }
    r.resize(static_cast<size_t>(std::max(b.deg(), 0)), Poly::zero(fd));
    return {XPoly(fd, std::move(q)), XPoly(fd, std::move(r))};
}

XPoly exact_div_monic(const XPoly& a, const XPoly& b) {
    auto [q, r] = divrem_monic(a, b);
    internal_check(r.is_zero(), "inexact division in x");
    return q;
}

XPoly derivative_x(const XPoly& a) {
    const FieldDescriptor* fd = a.field();
    if (a.deg() <= 0) return XPoly(fd);
    std::vector<Poly> c;
    for (int i = 1; i <= a.deg(); ++i) {
        int64_t m = i % fd->p;
        FieldElement s = FieldElement::from_encoding(fd, static_cast<uint64_t>(m));
        c.push_back(a.coeff(i) * s);
    }
    return XPoly(fd, std::move(c));
}

Poly content_t(const XPoly& a) {
    Poly g = Poly::zero(a.field());
    for (const auto& c : a.coeffs()) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? monic(c) : gcd_monic(g, c);
        if (g.is_one()) break;
    }
    return g;
}

namespace {

XPoly primitive_part(const XPoly& a) {
    Poly ct = content_t(a);
    if (ct.is_zero() || ct.is_one()) return a;
    std::vector<Poly> c;
    for (const auto& v : a.coeffs()) c.push_back(v.is_zero() ? v : exact_div(v, ct));
    return XPoly(a.field(), std::move(c));
}

// remainder of a by b up to a power of lead(b); callers take primitive parts
XPoly pseudo_rem(const XPoly& a, const XPoly& b) {
    const FieldDescriptor* fd = a.field();
    XPoly r = a;
    Poly lb = b.lead();
    while (!r.is_zero() && r.deg() >= b.deg()) {
        Poly lr = r.lead();
        std::vector<Poly> c(static_cast<size_t>(r.deg() - b.deg()), Poly::zero(fd));
        c.push_back(lr);
        XPoly shift(fd, std::move(c));
        r = r * lb - b * shift;
    }
    return r;
}

} // namespace

XPoly gcd_monic_x(const XPoly& a, const XPoly& b) {
    XPoly u = primitive_part(a), v = primitive_part(b);
    if (u.is_zero()) std::swap(u, v);
    while (!v.is_zero()) {
        XPoly r = pseudo_rem(u, v);
        u = v;
        v = primitive_part(r);
    }
    if (u.is_zero()) return u;
    // a monic divisor of a monic polynomial has unit leading coefficient
    // after removing content
    Poly lu = u.lead();
    internal_check(lu.deg() == 0, "gcd of monic polynomials has non-unit lead");
    return u * Poly::constant(lu.lead().inv());
}

XPoly deflate(const XPoly& a, int64_t k) {
    const FieldDescriptor* fd = a.field();
    std::vector<Poly> c;
    for (int i = 0; i <= a.deg(); i += static_cast<int>(k)) c.push_back(a.coeff(i));
    // exponents not divisible by k must vanish
    for (int i = 0; i <= a.deg(); ++i)
        if (i % k) internal_check(a.coeff(i).is_zero(), "deflation of non-sparse polynomial");
    return XPoly(fd, std::move(c));
}

XPoly inflate(const XPoly& a, int64_t k) {
    const FieldDescriptor* fd = a.field();
    if (a.is_zero()) return a;
    std::vector<Poly> c(static_cast<size_t>(a.deg()) * static_cast<size_t>(k) + 1, Poly::zero(fd));
    for (int i = 0; i <= a.deg(); ++i) c[static_cast<size_t>(i) * static_cast<size_t>(k)] = a.coeff(i);
    return XPoly(fd, std::move(c));
}

bool is_sigma_fixed(const XPoly& a, int qa) {
    for (const auto& c : a.coeffs())
        for (const auto& v : c.coeffs())
            if (v.pow_p_iterated(qa) != v) return false;
    return true;
}

XPoly map_into(const XPoly& a, const FieldDescriptor* target) {
    std::vector<Poly> c;
    for (const auto& v : a.coeffs()) c.push_back(map_into(v, target));
    return XPoly(target, std::move(c));
}

XPoly project_to_subfield(const XPoly& a, const FieldDescriptor* sub) {
    std::vector<Poly> c;
    for (const auto& v : a.coeffs()) {
        auto pr = project_poly(v, sub);
        check(pr.has_value(), Errc::not_a_rational, "coefficient not fixed by the q-power map");
        c.push_back(*pr);
    }
    return XPoly(sub, std::move(c));
}

// ---------------- RatFunc ----------------

void RatFunc::normalize() {
    internal_check(!d_.is_zero(), "zero denominator");
    if (n_.is_zero()) {
        d_ = Poly::one(d_.field());
        return;
    }
    Poly g = gcd_monic(n_, d_);
    if (!g.is_one()) {
        n_ = exact_div(n_, g);
        d_ = exact_div(d_, g);
    }
    if (!d_.is_monic()) {
        FieldElement linv = d_.lead().inv();
        n_ = n_ * linv;
        d_ = d_ * linv;
    }
}

RatFunc::RatFunc(const Poly& num) : n_(num), d_(Poly::one(num.field())) {}

RatFunc::RatFunc(const Poly& num, const Poly& den) : n_(num), d_(den) { normalize(); }

RatFunc RatFunc::operator+(const RatFunc& o) const { return RatFunc(n_ * o.d_ + o.n_ * d_, d_ * o.d_); }
RatFunc RatFunc::operator-(const RatFunc& o) const { return RatFunc(n_ * o.d_ - o.n_ * d_, d_ * o.d_); }
RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.n_ = -r.n_;
    return r;
}
RatFunc RatFunc::operator*(const RatFunc& o) const { return RatFunc(n_ * o.n_, d_ * o.d_); }
RatFunc RatFunc::operator/(const RatFunc& o) const {
    internal_check(!o.is_zero(), "division by zero");
    return RatFunc(n_ * o.d_, d_ * o.n_);
}
RatFunc RatFunc::inv() const {
    internal_check(!is_zero(), "inverse of zero");
    return RatFunc(d_, n_);
}

} // namespace anderson
