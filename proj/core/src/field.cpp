#include "anderson/field.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "anderson/factor.hpp"
#include "anderson/poly.hpp"

namespace anderson {

namespace {

bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// ---- dense F_p[x] scratch arithmetic for modulus construction ----

using FpPoly = std::vector<int32_t>; // c[0] + c[1] x + ..., trailing zeros trimmed

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<int32_t>((r[i + j] + int64_t(a[i]) * b[j]) % p);
    }
    fp_trim(r);
    return r;
}

// reduce a modulo the monic f (given as full coefficient list, lead 1)
FpPoly fp_mod(FpPoly a, const FpPoly& f, int64_t p) {
    fp_trim(a);
    int df = static_cast<int>(f.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= df) {
        int k = static_cast<int>(a.size()) - 1 - df;
        int64_t c = a.back();
        for (int i = 0; i <= df; ++i) {
            int64_t v = (a[k + i] - c * f[i]) % p;
            if (v < 0) v += p;
            a[k + i] = static_cast<int32_t>(v);
        }
        fp_trim(a);
    }
    return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, int64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // make b monic, reduce a mod b
        int64_t lb = b.back();
        // inverse of lb mod p
        int64_t inv = 1, base = lb % p, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        FpPoly bm(b);
        for (auto& c : bm) c = static_cast<int32_t>(int64_t(c) * inv % p);
        FpPoly r = fp_mod(a, bm, p);
        a = b;
        b = r;
    }
    return a;
}

// x^(p^k) mod f by iterated p-th powers (Frobenius spreads exponents)
FpPoly fp_xq_tower(const FpPoly& f, int64_t p, int k) {
    FpPoly u = fp_mod({0, 1}, f, p);
    for (int it = 0; it < k; ++it) {
        if (u.empty()) break;
        FpPoly up((u.size() - 1) * static_cast<size_t>(p) + 1, 0);
        for (size_t i = 0; i < u.size(); ++i) up[i * static_cast<size_t>(p)] = u[i];
        u = fp_mod(up, f, p);
    }
    return u;
}

bool fp_irreducible(const FpPoly& f, int64_t p) {
    int n = static_cast<int>(f.size()) - 1;
    if (n <= 0) return false;
    // x^(p^n) == x mod f
    FpPoly xn = fp_xq_tower(f, p, n);
    FpPoly x = fp_mod({0, 1}, f, p);
    if (xn != x) return false;
    for (int l = 2; l <= n; ++l) {
        if (n % l) continue;
        bool lp = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) { lp = false; break; }
        if (!lp) continue;
        FpPoly g = fp_xq_tower(f, p, n / l);
        // gcd(g - x, f) must be 1
        FpPoly diff = g;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<int32_t>(((diff[1] - 1) % p + p) % p);
        fp_trim(diff);
        FpPoly gc = fp_gcd(f, diff, p);
        if (static_cast<int>(gc.size()) - 1 != 0) return false;
    }
    return true;
}

struct Registry {
    std::mutex mu;
    std::deque<std::unique_ptr<FieldDescriptor>> fields;
    std::map<std::pair<int64_t, int>, const FieldDescriptor*> by_pn;
    // Embedding src -> tgt: image of the source generator plus the n_tgt x n_src
    // F_p matrix of the induced linear map, and a solver for projection.
    struct Embedding {
        std::vector<FieldElement> gen_powers; // img^0..img^(n_src-1)
        std::vector<int32_t> mat;             // n_tgt x n_src
        // row echelon data for projections
        std::vector<int32_t> rref;   // n_tgt x (n_src + n_tgt) augmented [mat | I]
        std::vector<int> pivot_col;  // per rref row
    };
    std::map<std::pair<const FieldDescriptor*, const FieldDescriptor*>, Embedding> embeddings;

    static Registry& instance() {
        static Registry r;
        return r;
    }
};

std::vector<int32_t> frobenius_matrix(const FpPoly& modulus_full, int64_t p, int n) {
    std::vector<int32_t> m(static_cast<size_t>(n) * n, 0);
    // column j = coords of x^(j*p) mod f
    FpPoly cur = {1};
    FpPoly xp = fp_xq_tower(modulus_full, p, 1);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i)
            m[static_cast<size_t>(i) * n + j] = i < static_cast<int>(cur.size()) ? cur[i] : 0;
        cur = fp_mod(fp_mul(cur, xp, p), modulus_full, p);
    }
    return m;
}

const Registry::Embedding& get_embedding(const FieldDescriptor* src, const FieldDescriptor* tgt);

} // namespace

uint64_t FieldDescriptor::card_small() const {
    uint64_t c = 1;
    for (int i = 0; i < n; ++i) c *= static_cast<uint64_t>(p);
    return c;
}

std::string FieldDescriptor::name() const {
    std::ostringstream os;
    os << "F_" << p;
    if (n > 1) os << "^" << n;
    return os.str();
}

FieldElement::FieldElement(const FieldDescriptor* fd, std::vector<int32_t> coeffs)
    : fd_(fd), c_(std::move(coeffs)) {
    internal_check(static_cast<int>(c_.size()) == fd->n, "field element width");
    for (auto& v : c_) {
        v = static_cast<int32_t>(v % fd->p);
        if (v < 0) v += static_cast<int32_t>(fd->p);
    }
}

FieldElement FieldElement::zero(const FieldDescriptor* fd) {
    return FieldElement(fd, std::vector<int32_t>(static_cast<size_t>(fd->n), 0));
}

FieldElement FieldElement::one(const FieldDescriptor* fd) {
    std::vector<int32_t> c(static_cast<size_t>(fd->n), 0);
    c[0] = 1;
    return FieldElement(fd, std::move(c));
}

FieldElement FieldElement::gen(const FieldDescriptor* fd) {
    std::vector<int32_t> c(static_cast<size_t>(fd->n), 0);
    if (fd->n == 1) {
        // residue of x is -modulus[0]
        c[0] = static_cast<int32_t>((fd->p - fd->modulus[0]) % fd->p);
    } else {
        c[1] = 1;
    }
    return FieldElement(fd, std::move(c));
}

FieldElement FieldElement::from_encoding(const FieldDescriptor* fd, uint64_t enc) {
    std::vector<int32_t> c(static_cast<size_t>(fd->n), 0);
    for (int i = 0; i < fd->n; ++i) {
        c[static_cast<size_t>(i)] = static_cast<int32_t>(enc % static_cast<uint64_t>(fd->p));
        enc /= static_cast<uint64_t>(fd->p);
    }
    internal_check(enc == 0, "element encoding out of range");
    return FieldElement(fd, std::move(c));
}

uint64_t FieldElement::encoding() const {
    uint64_t e = 0;
    for (int i = fd_->n - 1; i >= 0; --i)
        e = e * static_cast<uint64_t>(fd_->p) + static_cast<uint64_t>(c_[static_cast<size_t>(i)]);
    return e;
}

bool FieldElement::is_zero() const {
    for (auto v : c_)
        if (v) return false;
    return true;
}

bool FieldElement::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    internal_check(fd_ == o.fd_, "field mismatch in +");
    std::vector<int32_t> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) {
        int64_t v = c_[i] + o.c_[i];
        if (v >= fd_->p) v -= fd_->p;
        c[i] = static_cast<int32_t>(v);
    }
    FieldElement r;
    r.fd_ = fd_;
    r.c_ = std::move(c);
    return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    internal_check(fd_ == o.fd_, "field mismatch in -");
    std::vector<int32_t> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) {
        int64_t v = c_[i] - o.c_[i];
        if (v < 0) v += fd_->p;
        c[i] = static_cast<int32_t>(v);
    }
    FieldElement r;
    r.fd_ = fd_;
    r.c_ = std::move(c);
    return r;
}

FieldElement FieldElement::operator-() const {
    std::vector<int32_t> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i)
        c[i] = static_cast<int32_t>(c_[i] ? fd_->p - c_[i] : 0);
    FieldElement r;
    r.fd_ = fd_;
    r.c_ = std::move(c);
    return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    internal_check(fd_ == o.fd_, "field mismatch in *");
    const int n = fd_->n;
    const int64_t p = fd_->p;
    if (n == 1) {
        std::vector<int32_t> c{static_cast<int32_t>(int64_t(c_[0]) * o.c_[0] % p)};
        FieldElement r;
        r.fd_ = fd_;
        r.c_ = std::move(c);
        return r;
    }
    std::vector<int64_t> prod(static_cast<size_t>(2 * n - 1), 0);
    for (int i = 0; i < n; ++i) {
        if (!c_[static_cast<size_t>(i)]) continue;
        for (int j = 0; j < n; ++j)
            prod[static_cast<size_t>(i + j)] += int64_t(c_[static_cast<size_t>(i)]) * o.c_[static_cast<size_t>(j)];
    }
    // reduce mod modulus: x^n = -sum modulus[i] x^i
    for (int k = 2 * n - 2; k >= n; --k) {
        int64_t v = prod[static_cast<size_t>(k)] % p;
        if (!v) continue;
        for (int i = 0; i < n; ++i)
            prod[static_cast<size_t>(k - n + i)] -= v * fd_->modulus[static_cast<size_t>(i)];
        prod[static_cast<size_t>(k)] = 0;
    }
    std::vector<int32_t> c(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int64_t v = prod[static_cast<size_t>(i)] % p;
        if (v < 0) v += p;
        c[static_cast<size_t>(i)] = static_cast<int32_t>(v);
    }
    FieldElement r;
    r.fd_ = fd_;
    r.c_ = std::move(c);
    return r;
}

FieldElement FieldElement::pow(uint64_t e) const {
    FieldElement acc = one(fd_);
    FieldElement b = *this;
    while (e) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

FieldElement FieldElement::inv() const {
    internal_check(!is_zero(), "inverse of zero");
    // x^(p^n - 2) would overflow for large fields; use extended Euclid over F_p[x].
    const int64_t p = fd_->p;
    FpPoly a(c_.begin(), c_.end());
    fp_trim(a);
    FpPoly f(fd_->modulus.begin(), fd_->modulus.end());
    f.push_back(1);
    // extended gcd of a and f
    FpPoly r0 = f, r1 = a, s0 = {}, s1 = {1};
    while (!r1.empty()) {
        // r0 = q r1 + r, with division
        FpPoly q, r = r0;
        int d1 = static_cast<int>(r1.size()) - 1;
        int64_t lead = r1.back();
        int64_t linv = 1, base = lead % p, e = p - 2;
        while (e) {
            if (e & 1) linv = linv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        q.assign(r.size(), 0);
        while (static_cast<int>(r.size()) - 1 >= d1 && !r.empty()) {
            int k = static_cast<int>(r.size()) - 1 - d1;
            int64_t c = r.back() % p * linv % p;
            q[static_cast<size_t>(k)] = static_cast<int32_t>(c);
            for (int i = 0; i <= d1; ++i) {
                int64_t v = (r[static_cast<size_t>(k + i)] - c * r1[static_cast<size_t>(i)]) % p;
                if (v < 0) v += p;
                r[static_cast<size_t>(k + i)] = static_cast<int32_t>(v);
            }
            fp_trim(r);
        }
        fp_trim(q);
        // s = s0 - q s1
        FpPoly qs = fp_mul(q, s1, p);
        FpPoly s = s0;
        if (s.size() < qs.size()) s.resize(qs.size(), 0);
        for (size_t i = 0; i < qs.size(); ++i) {
            int64_t v = (s[i] - qs[i]) % p;
            if (v < 0) v += p;
            s[i] = static_cast<int32_t>(v);
        }
        fp_trim(s);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    internal_check(static_cast<int>(r0.size()) - 1 == 0, "gcd with modulus not constant");
    int64_t g = r0[0];
    int64_t ginv = 1, base = g % p, e = p - 2;
    while (e) {
        if (e & 1) ginv = ginv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    std::vector<int32_t> c(static_cast<size_t>(fd_->n), 0);
    for (size_t i = 0; i < s0.size(); ++i)
        c[i] = static_cast<int32_t>(int64_t(s0[i]) * ginv % p);
    FieldElement r;
    r.fd_ = fd_;
    r.c_ = std::move(c);
    return r;
}

FieldElement FieldElement::frobenius() const {
    const int n = fd_->n;
    std::vector<int32_t> c(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        int64_t acc = 0;
        for (int j = 0; j < n; ++j)
            acc += int64_t(fd_->frob[static_cast<size_t>(i) * n + j]) * c_[static_cast<size_t>(j)];
        c[static_cast<size_t>(i)] = static_cast<int32_t>(acc % fd_->p);
    }
    FieldElement r;
    r.fd_ = fd_;
    r.c_ = std::move(c);
    return r;
}

FieldElement FieldElement::frobenius_inv() const {
    FieldElement r = *this;
    for (int i = 0; i < fd_->n - 1; ++i) r = r.frobenius();
    return r;
}

FieldElement FieldElement::pow_p_iterated(int k) const {
    FieldElement r = *this;
    k %= fd_->n == 0 ? 1 : fd_->n; // x^(p^n) = x
    if (k < 0) k += fd_->n;
    for (int i = 0; i < k; ++i) r = r.frobenius();
    return r;
}

std::string FieldElement::str() const {
    return std::to_string(encoding());
}

namespace fields {

const FieldDescriptor* get(int64_t p, int n) {
    check(is_prime(p), Errc::not_prime, std::to_string(p) + " is not prime");
    check(n >= 1, Errc::not_prime, "extension degree must be positive");
    auto& reg = Registry::instance();
    std::lock_guard<std::mutex> lk(reg.mu);
    auto key = std::make_pair(p, n);
    auto it = reg.by_pn.find(key);
    if (it != reg.by_pn.end()) return it->second;

    // first irreducible in the canonical enumeration
    auto fd = std::make_unique<FieldDescriptor>();
    fd->p = p;
    fd->n = n;
    bool found = false;
    // enumerate by base-p value of (c_0, ..., c_{n-1})
    std::vector<int32_t> c(static_cast<size_t>(n), 0);
    while (true) {
        FpPoly full(c.begin(), c.end());
        full.push_back(1);
        if (fp_irreducible(full, p)) {
            fd->modulus = c;
            found = true;
            break;
        }
        int i = 0;
        while (i < n) {
            if (++c[static_cast<size_t>(i)] < p) break;
            c[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
    }
    internal_check(found, "no irreducible modulus found");
    FpPoly full(fd->modulus.begin(), fd->modulus.end());
    full.push_back(1);
    fd->frob = frobenius_matrix(full, p, n);
    const FieldDescriptor* ptr = fd.get();
    reg.fields.push_back(std::move(fd));
    reg.by_pn[key] = ptr;
    return ptr;
}

std::vector<FieldElement> all_elements(const FieldDescriptor* fd) {
    uint64_t card = fd->card_small();
    std::vector<FieldElement> out;
    out.reserve(card);
    for (uint64_t e = 0; e < card; ++e) out.push_back(FieldElement::from_encoding(fd, e));
    return out;
}

} // namespace fields

namespace {

// Solve the embedding: find the least-encoded root of the source modulus in
// the target field and build the induced F_p-linear map.
const Registry::Embedding& get_embedding(const FieldDescriptor* src, const FieldDescriptor* tgt) {
    auto& reg = Registry::instance();
    {
        std::lock_guard<std::mutex> lk(reg.mu);
        auto it = reg.embeddings.find({src, tgt});
        if (it != reg.embeddings.end()) return it->second;
    }
    check(src->p == tgt->p && tgt->n % src->n == 0, Errc::no_embedding,
          src->name() + " does not embed into " + tgt->name());

    // source modulus as a polynomial over the target field
    std::vector<FieldElement> mc;
    mc.reserve(static_cast<size_t>(src->n) + 1);
    for (int i = 0; i < src->n; ++i)
        mc.push_back(FieldElement::from_encoding(tgt, static_cast<uint64_t>(src->modulus[static_cast<size_t>(i)])));
    mc.push_back(FieldElement::one(tgt));
    Poly mod_tgt(tgt, std::move(mc));
    std::vector<FieldElement> roots = find_roots(mod_tgt);
    internal_check(static_cast<int>(roots.size()) == src->n, "embedding root count");
    std::sort(roots.begin(), roots.end(),
              [](const FieldElement& a, const FieldElement& b) { return a.encoding() < b.encoding(); });
    FieldElement img = roots.front();

    Registry::Embedding emb;
    emb.gen_powers.reserve(static_cast<size_t>(src->n));
    FieldElement cur = FieldElement::one(tgt);
    for (int j = 0; j < src->n; ++j) {
        emb.gen_powers.push_back(cur);
        cur = cur * img;
    }
    const int nt = tgt->n, ns = src->n;
    emb.mat.assign(static_cast<size_t>(nt) * ns, 0);
    for (int j = 0; j < ns; ++j)
        for (int i = 0; i < nt; ++i)
            emb.mat[static_cast<size_t>(i) * ns + j] = emb.gen_powers[static_cast<size_t>(j)].coeff(i);

    // row-reduce [mat | I] over F_p for projection solves
    const int64_t p = tgt->p;
    const int w = ns + nt;
    emb.rref.assign(static_cast<size_t>(nt) * w, 0);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < ns; ++j) emb.rref[static_cast<size_t>(i) * w + j] = emb.mat[static_cast<size_t>(i) * ns + j];
        emb.rref[static_cast<size_t>(i) * w + ns + i] = 1;
    }
    int row = 0;
    for (int col = 0; col < ns && row < nt; ++col) {
        int pr = -1;
        for (int i = row; i < nt; ++i)
            if (emb.rref[static_cast<size_t>(i) * w + col]) { pr = i; break; }
        if (pr < 0) continue;
        for (int j = 0; j < w; ++j)
            std::swap(emb.rref[static_cast<size_t>(row) * w + j], emb.rref[static_cast<size_t>(pr) * w + j]);
        int64_t lead = emb.rref[static_cast<size_t>(row) * w + col];
        int64_t inv = 1, base = lead % p, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        for (int j = 0; j < w; ++j)
            emb.rref[static_cast<size_t>(row) * w + j] =
                static_cast<int32_t>(int64_t(emb.rref[static_cast<size_t>(row) * w + j]) * inv % p);
        for (int i = 0; i < nt; ++i) {
            if (i == row) continue;
            int64_t c = emb.rref[static_cast<size_t>(i) * w + col];
            if (!c) continue;
            for (int j = 0; j < w; ++j) {
                int64_t v = (emb.rref[static_cast<size_t>(i) * w + j] -
                             c * emb.rref[static_cast<size_t>(row) * w + j]) % p;
                if (v < 0) v += p;
                emb.rref[static_cast<size_t>(i) * w + j] = static_cast<int32_t>(v);
            }
        }
        emb.pivot_col.push_back(col);
        ++row;
    }

    std::lock_guard<std::mutex> lk(reg.mu);
    auto [it, inserted] = reg.embeddings.emplace(std::make_pair(src, tgt), std::move(emb));
    (void)inserted;
    return it->second;
}

} // namespace

namespace fields {

FieldElement embed(const FieldElement& x, const FieldDescriptor* target) {
    const FieldDescriptor* src = x.field();
    if (src == target) return x;
    const auto& emb = get_embedding(src, target);
    FieldElement acc = FieldElement::zero(target);
    for (int j = 0; j < src->n; ++j) {
        int32_t a = x.coeff(j);
        if (!a) continue;
        FieldElement term = emb.gen_powers[static_cast<size_t>(j)];
        // scalar multiple by the prime-field constant a
        FieldElement scalar = FieldElement::from_encoding(target, static_cast<uint64_t>(a));
        acc = acc + term * scalar;
    }
    return acc;
}

std::optional<FieldElement> project(const FieldElement& x, const FieldDescriptor* sub) {
    const FieldDescriptor* tgt = x.field();
    if (tgt == sub) return x;
    if (tgt->p != sub->p || tgt->n % sub->n != 0) return std::nullopt;
    const auto& emb = get_embedding(sub, tgt);
    const int nt = tgt->n, ns = sub->n, w = ns + nt;
    const int64_t p = tgt->p;
    // solve mat * a = x using the cached rref of [mat | I]
    std::vector<int32_t> a(static_cast<size_t>(ns), 0);
    std::vector<int32_t> rhs(static_cast<size_t>(nt), 0);
    for (int i = 0; i < nt; ++i) {
        int64_t acc = 0;
        for (int k = 0; k < nt; ++k)
            acc += int64_t(emb.rref[static_cast<size_t>(i) * w + ns + k]) * x.coeff(k);
        rhs[static_cast<size_t>(i)] = static_cast<int32_t>(acc % p);
    }
    int nrows = static_cast<int>(emb.pivot_col.size());
    for (int r = 0; r < nrows; ++r) a[static_cast<size_t>(emb.pivot_col[static_cast<size_t>(r)])] = rhs[static_cast<size_t>(r)];
    for (int r = nrows; r < nt; ++r)
        if (rhs[static_cast<size_t>(r)]) return std::nullopt; // inconsistent: x not in the subfield
    // verify (guards against rounding in the rank bookkeeping)
    FieldElement back = FieldElement::zero(tgt);
    for (int j = 0; j < ns; ++j) {
        if (!a[static_cast<size_t>(j)]) continue;
        back = back + emb.gen_powers[static_cast<size_t>(j)] *
                          FieldElement::from_encoding(tgt, static_cast<uint64_t>(a[static_cast<size_t>(j)]));
    }
    if (!(back == x)) return std::nullopt;
    return FieldElement(sub, std::move(a));
}

std::vector<FieldElement> tower_coords(const FieldElement& x, const FieldDescriptor* sub) {
    const FieldDescriptor* L = x.field();
    internal_check(L->p == sub->p && L->n % sub->n == 0, "not a subfield");
    const int e = L->n / sub->n;
    if (e == 1) {
        auto pr = project(x, sub);
        internal_check(pr.has_value(), "tower coordinates failed");
        return {*pr};
    }
    // basis vectors embed(beta_k) * gamma^i, beta_k = gen_sub^k, gamma = gen_L
    FieldElement gamma = FieldElement::gen(L);
    std::vector<FieldElement> beta;
    {
        FieldElement b = FieldElement::one(sub);
        FieldElement gs = FieldElement::gen(sub);
        for (int k = 0; k < sub->n; ++k) {
            beta.push_back(embed(b, L));
            b = b * gs;
        }
    }
    const int n = L->n;
    const int64_t p = L->p;
    // solve the n x n system over F_p each call; fields are small
    std::vector<int32_t> mat(static_cast<size_t>(n) * (n + 1), 0);
    FieldElement gpow = FieldElement::one(L);
    for (int i = 0; i < e; ++i) {
        for (int k = 0; k < sub->n; ++k) {
            FieldElement bv = beta[static_cast<size_t>(k)] * gpow;
            int col = i * sub->n + k;
            for (int row = 0; row < n; ++row) mat[static_cast<size_t>(row) * (n + 1) + col] = bv.coeff(row);
        }
        gpow = gpow * gamma;
    }
    for (int row = 0; row < n; ++row) mat[static_cast<size_t>(row) * (n + 1) + n] = x.coeff(row);
    // gaussian elimination
    std::vector<int32_t> sol(static_cast<size_t>(n), 0);
    {
        int r = 0;
        std::vector<int> pivots;
        for (int col = 0; col < n && r < n; ++col) {
            int pr = -1;
            for (int i = r; i < n; ++i)
                if (mat[static_cast<size_t>(i) * (n + 1) + col]) { pr = i; break; }
            if (pr < 0) continue;
            for (int j = 0; j <= n; ++j)
                std::swap(mat[static_cast<size_t>(pr) * (n + 1) + j], mat[static_cast<size_t>(r) * (n + 1) + j]);
            int64_t lead = mat[static_cast<size_t>(r) * (n + 1) + col];
            int64_t inv = 1, base = lead % p, ee = p - 2;
            while (ee) {
                if (ee & 1) inv = inv * base % p;
                base = base * base % p;
                ee >>= 1;
            }
            for (int j = 0; j <= n; ++j)
                mat[static_cast<size_t>(r) * (n + 1) + j] =
                    static_cast<int32_t>(int64_t(mat[static_cast<size_t>(r) * (n + 1) + j]) * inv % p);
            for (int i = 0; i < n; ++i) {
                if (i == r) continue;
                int64_t c = mat[static_cast<size_t>(i) * (n + 1) + col];
                if (!c) continue;
                for (int j = 0; j <= n; ++j) {
                    int64_t v = (mat[static_cast<size_t>(i) * (n + 1) + j] -
                                 c * mat[static_cast<size_t>(r) * (n + 1) + j]) % p;
                    if (v < 0) v += p;
                    mat[static_cast<size_t>(i) * (n + 1) + j] = static_cast<int32_t>(v);
                }
            }
            pivots.push_back(col);
            ++r;
        }
        internal_check(static_cast<int>(pivots.size()) == n, "tower basis is singular");
        for (int i = 0; i < n; ++i) sol[static_cast<size_t>(pivots[static_cast<size_t>(i)])] = mat[static_cast<size_t>(i) * (n + 1) + n];
    }
    std::vector<FieldElement> out;
    for (int i = 0; i < e; ++i) {
        std::vector<int32_t> c(sol.begin() + i * sub->n, sol.begin() + (i + 1) * sub->n);
        out.emplace_back(sub, std::move(c));
    }
    return out;
}

FieldElement tower_lift(const std::vector<FieldElement>& coords, const FieldDescriptor* target) {
    internal_check(!coords.empty(), "empty tower coordinates");
    FieldElement gamma = FieldElement::gen(target);
    FieldElement acc = FieldElement::zero(target);
    FieldElement gpow = FieldElement::one(target);
    for (const auto& c : coords) {
        acc = acc + embed(c, target) * gpow;
        gpow = gpow * gamma;
    }
    return acc;
}

} // namespace fields

} // namespace anderson
