#include "anderson/motive.hpp"

#include <algorithm>

namespace anderson {

namespace {

// q = p^a for a prime p
void split_prime_power(int64_t q, int64_t& p, int& a) {
    check(q >= 2, Errc::not_prime, "q must be a prime power >= 2");
    int64_t d = 2;
    while (d * d <= q && q % d) ++d;
    p = (d * d <= q) ? d : q;
    a = 0;
    int64_t r = q;
    while (r > 1) {
        check(r % p == 0, Errc::not_prime, "q is not a prime power");
        r /= p;
        ++a;
    }
}

} // namespace

struct Motive::Data {
    int64_t q = 0;
    int e = 1;
    int qa = 1; // q = p^qa
    const FieldDescriptor* L = nullptr;
    const FieldDescriptor* Fq = nullptr;
    FieldElement theta;
    PolyMat T;

    std::optional<Errc> invalid;
    std::string invalid_msg;

    int r = 0, d = 0;
    Rat weight;
    Poly epsilon;
    PolyMat Pi;
    CharPolyData cp;
    bool have_chi = false;
    bool pure = false;
    bool semisimple = false;
    std::vector<Rat> slopes;
};

Motive::Motive(int64_t q, int e, const FieldElement& theta, const PolyMat& T) {
    auto d = std::make_shared<Data>();
    d->q = q;
    d->e = e;
    int64_t p = 0;
    split_prime_power(q, p, d->qa);
    check(e >= 1, Errc::degenerate, "base field degree must be positive");
    d->L = fields::get(p, d->qa * e);
    d->Fq = fields::get(p, d->qa);
    internal_check(theta.field() == d->L && T.fd == d->L, "motive data over the wrong field");
    check(T.rows == T.cols && T.rows >= 1, Errc::degenerate, "tau matrix must be square and nonempty");
    d->theta = theta;
    d->T = T;
    d->r = T.rows;

    auto fail = [&](Errc c, const std::string& msg) {
        if (!d->invalid) {
            d->invalid = c;
            d->invalid_msg = msg;
        }
    };

    // epsilon: minimal polynomial of theta over F_q, by the sigma-orbit product
    {
        std::vector<FieldElement> orbit;
        FieldElement cur = theta;
        do {
            orbit.push_back(cur);
            cur = cur.pow_p_iterated(d->qa);
        } while (!(cur == theta));
        Poly eps = Poly::one(d->L);
        Poly t = Poly::x(d->L);
        for (const auto& c : orbit) eps = eps * (t - Poly::constant(c));
        auto down = project_poly(eps, d->Fq);
        internal_check(down.has_value(), "orbit product not rational over F_q");
        d->epsilon = *down;
    }

    Poly dt = det(T);
    if (dt.is_zero()) {
        fail(Errc::not_injective, "det tau = 0");
        d_ = std::move(d);
        return;
    }
    d->d = dt.deg();
    d->weight = Rat(d->d, d->r);
    {
        Poly lin = Poly::x(d->L) - Poly::constant(theta);
        Poly pw = Poly::one(d->L);
        for (int i = 0; i < d->d; ++i) pw = pw * lin;
        auto [u, rem] = divrem(dt, pw);
        if (!rem.is_zero() || u.deg() != 0)
            fail(Errc::bad_characteristic, "det tau is not a unit times (t - theta)^d");
    }
    if (d->d == 0) fail(Errc::degenerate, "dimension 0 with positive rank");

    // Frobenius and characteristic data
    d->Pi = T;
    for (int i = 1; i < e; ++i) d->Pi = d->Pi * sigma_mat(T, d->qa * i);
    XPoly chi_L = char_poly(d->Pi);
    if (!is_sigma_fixed(chi_L, d->qa)) {
        fail(Errc::internal, "characteristic polynomial of Frobenius is not A-rational");
        d_ = std::move(d);
        return;
    }
    d->cp.chi = project_to_subfield(chi_L, d->Fq);
    XPoly mu_L = min_poly(d->Pi);
    internal_check(is_sigma_fixed(mu_L, d->qa), "minimal polynomial of Frobenius is not A-rational");
    d->cp.mu = project_to_subfield(mu_L, d->Fq);
    d->cp.factorization = factor_over_A(d->cp.chi);
    d->have_chi = true;

    // semisimple iff mu is squarefree, read from the multiplicity structure
    {
        XPoly rad = XPoly::one(d->Fq);
        for (auto& [h, m] : d->cp.factorization) rad = rad * h;
        d->semisimple = (rad == d->cp.mu);
    }

    // slopes at infinity and the purity test
    {
        NewtonPolygon np = newton_polygon(d->cp.chi, Place::at_infinity(d->Fq));
        internal_check(np.zero_root_multiplicity == 0, "Frobenius has eigenvalue 0");
        for (const auto& seg : np.segments)
            for (int i = 0; i < seg.length; ++i) d->slopes.push_back(-seg.slope / e);
        d->pure = np.segments.size() == 1;
        if (!d->pure) fail(Errc::not_pure, "Newton polygon of chi at infinity has several slopes");
    }

    d_ = std::move(d);
}

int64_t Motive::q() const { return data().q; }
int Motive::e() const { return data().e; }
int Motive::q_exp() const { return data().qa; }
const FieldDescriptor* Motive::base_field() const { return data().L; }
const FieldDescriptor* Motive::coeff_field() const { return data().Fq; }
const FieldElement& Motive::theta() const { return data().theta; }
const PolyMat& Motive::tau() const { return data().T; }
int Motive::rank() const { return data().r; }
int Motive::dim() const { return data().d; }
Rat Motive::weight() const { return data().weight; }
const Poly& Motive::epsilon() const { return data().epsilon; }
bool Motive::is_pure() const { return data().pure; }
bool Motive::is_valid() const { return !data().invalid.has_value(); }

void Motive::require_valid() const {
    if (data().invalid) raise(*data().invalid, data().invalid_msg);
}

void Motive::require_chi() const {
    check(data().have_chi, data().invalid.value_or(Errc::internal), data().invalid_msg);
}

MotiveReport Motive::validate() const {
    require_valid();
    const Data& d = data();
    MotiveReport rep;
    rep.r = d.r;
    rep.d = d.d;
    rep.weight = d.weight;
    rep.epsilon = d.epsilon;
    rep.pure = d.pure;
    rep.semisimple = d.semisimple;
    rep.chi = d.cp.chi;
    rep.mu = d.cp.mu;
    return rep;
}

const PolyMat& Motive::frobenius_matrix() const {
    require_chi();
    return data().Pi;
}

const CharPolyData& Motive::char_poly_data() const {
    require_chi();
    return data().cp;
}

bool Motive::is_semisimple() const {
    require_chi();
    return data().semisimple;
}

std::vector<Rat> Motive::slopes_at_infinity() const {
    require_chi();
    return data().slopes;
}

bool Motive::rh_check() const {
    require_chi();
    const auto& s = data().slopes;
    for (const auto& v : s)
        if (v != s[0]) return false;
    return true;
}

ZetaFunction Motive::zeta() const {
    require_valid();
    const Data& d = data();
    ZetaFunction z;
    for (int i = 0; i <= d.r; ++i) {
        PolyMat w = exterior_power(d.Pi, i);
        XPoly cp = char_poly(w); // monic of degree C(r, i)
        internal_check(is_sigma_fixed(cp, d.qa), "zeta numerator not A-rational");
        XPoly cpq = project_to_subfield(cp, d.Fq);
        // det(1 - u W) is the reversed characteristic polynomial
        int k = cp.deg();
        std::vector<Poly> rev(static_cast<size_t>(k) + 1, Poly::zero(d.Fq));
        for (int j = 0; j <= k; ++j) rev[static_cast<size_t>(k - j)] = cpq.coeff(j);
        z.numerators.push_back(XPoly(d.Fq, std::move(rev)));
    }
    return z;
}

bool Motive::operator==(const Motive& o) const {
    return data().q == o.data().q && data().e == o.data().e && data().theta == o.data().theta &&
           data().T == o.data().T;
}

Motive base_extend(const Motive& m, int ext) {
    check(ext >= 1, Errc::degenerate, "extension degree must be positive");
    if (ext == 1) return m;
    int64_t p = m.base_field()->p;
    const FieldDescriptor* L2 = fields::get(p, m.q_exp() * m.e() * ext);
    return Motive(m.q(), m.e() * ext, fields::embed(m.theta(), L2), map_into(m.tau(), L2));
}

Motive direct_sum(const Motive& a, const Motive& b) {
    check(a.q() == b.q() && a.e() == b.e() && a.theta() == b.theta(), Errc::field_mismatch,
          "summands live over different data");
    return Motive(a.q(), a.e(), a.theta(), block_diag(a.tau(), b.tau()));
}

int semisimplification_degree(const Motive& m) {
    int64_t p = m.base_field()->p;
    int ext = 1;
    while (true) {
        Motive mm = base_extend(m, ext);
        if (mm.is_semisimple()) return ext;
        internal_check(ext < m.rank(), "semisimplification bound exceeded");
        ext *= static_cast<int>(p);
    }
}

std::vector<Poly> zeta_point_counts(const ZetaFunction& z, int order) {
    internal_check(!z.numerators.empty(), "empty zeta data");
    const FieldDescriptor* fd = z.numerators[0].field();
    // truncated power series in u with Poly coefficients
    using Series = std::vector<Poly>;
    auto mul = [&](const Series& a, const Series& b) {
        Series r(static_cast<size_t>(order) + 1, Poly::zero(fd));
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) r[static_cast<size_t>(i + j)] = r[static_cast<size_t>(i + j)] + a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
        return r;
    };
    auto inv = [&](const Series& a) {
        internal_check(a[0].is_one(), "series inversion needs constant term 1");
        Series r(static_cast<size_t>(order) + 1, Poly::zero(fd));
        r[0] = Poly::one(fd);
        for (int k = 1; k <= order; ++k) {
            Poly s = Poly::zero(fd);
            for (int i = 1; i <= k; ++i) s = s + a[static_cast<size_t>(i)] * r[static_cast<size_t>(k - i)];
            r[static_cast<size_t>(k)] = -s;
        }
        return r;
    };
    Series total(static_cast<size_t>(order) + 1, Poly::zero(fd));
    for (size_t i = 0; i < z.numerators.size(); ++i) {
        const XPoly& N = z.numerators[i];
        // u N'/N as a truncated series
        Series n(static_cast<size_t>(order) + 1, Poly::zero(fd));
        Series un(static_cast<size_t>(order) + 1, Poly::zero(fd));
        for (int k = 0; k <= order; ++k) n[static_cast<size_t>(k)] = N.coeff(k);
        for (int k = 1; k <= order; ++k) {
            // u N' has coefficient k*N_k at u^k
            int64_t s = k % fd->p;
            un[static_cast<size_t>(k)] = N.coeff(k) * FieldElement::from_encoding(fd, static_cast<uint64_t>(s));
        }
        Series term = mul(un, inv(n));
        int sign = (i % 2 == 0) ? -1 : 1; // (-1)^(i+1)
        for (int k = 0; k <= order; ++k) {
            if (sign > 0)
                total[static_cast<size_t>(k)] = total[static_cast<size_t>(k)] + term[static_cast<size_t>(k)];
            else
                total[static_cast<size_t>(k)] = total[static_cast<size_t>(k)] - term[static_cast<size_t>(k)];
        }
    }
    std::vector<Poly> out;
    for (int k = 1; k <= order; ++k) out.push_back(total[static_cast<size_t>(k)]);
    return out;
}

} // namespace anderson
