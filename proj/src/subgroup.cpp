#include "gl2/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "gl2/arith.hpp"
#include "gl2/errors.hpp"

namespace gl2 {

using namespace keyops;

// ---------------------------------------------------------------- Subgroup

Subgroup::Subgroup(std::uint32_t n, std::vector<Mat2> gens, std::size_t cap)
    : n_(n), gens_(std::move(gens)), cap_(cap), state_(std::make_shared<State>()) {
    for (const Mat2& g : gens_) {
        if (g.modulus() != n_)
            throw ModulusMismatch("generator " + g.str() + " has modulus " +
                                  std::to_string(g.modulus()) + ", expected " + std::to_string(n_));
        if (!is_invertible(g)) throw NotInvertible("generator " + g.str() + " is not invertible");
    }
}

Subgroup Subgroup::from_elements(std::uint32_t n, std::vector<std::uint64_t> keys,
                                 std::vector<Mat2> gens) {
    Subgroup h(n, std::move(gens), std::max<std::size_t>(kDefaultCap, keys.size()));
    std::call_once(h.state_->once, [&] {
        auto e = std::make_shared<Elements>();
        e->set.reserve(keys.size());
        for (std::uint64_t k : keys) e->set.insert(k);
        e->keys = std::move(keys);
        h.state_->elems = std::move(e);
    });
    return h;
}

const Subgroup::Elements& Subgroup::elements() const {
    std::call_once(state_->once, [this] {
        auto e = std::make_shared<Elements>();
        std::vector<std::uint64_t> g;
        for (const Mat2& x : gens_) g.push_back(x.key());
        std::uint64_t id = identity(n_);
        e->keys.push_back(id);
        e->set.insert(id);
        for (std::size_t head = 0; head < e->keys.size(); ++head) {
            std::uint64_t x = e->keys[head];
            for (std::uint64_t y : g) {
                std::uint64_t z = mul(x, y, n_);
                if (e->set.insert(z)) {
                    e->keys.push_back(z);
                    if (e->keys.size() > cap_)
                        throw CapExceeded("closure exceeded cap " + std::to_string(cap_),
                                          e->keys.size());
                }
            }
        }
        state_->elems = std::move(e);
    });
    return *state_->elems;
}

bool Subgroup::materialized() const { return static_cast<bool>(state_->elems); }

std::uint64_t Subgroup::index() const { return gl2_order(n_) / order(); }

bool Subgroup::contains(const Mat2& x) const {
    if (x.modulus() != n_)
        throw ModulusMismatch("membership test of " + x.str() + " mod " + std::to_string(x.modulus()) +
                              " in a group mod " + std::to_string(n_));
    return contains_key(x.key());
}

std::string Subgroup::describe() const {
    if (label_) return *label_;
    std::ostringstream os;
    os << "<mod " << n_ << ":";
    for (std::size_t i = 0; i < gens_.size(); ++i) os << (i ? ";" : " ") << gens_[i];
    os << ">";
    return os.str();
}

Subgroup closure(const std::vector<Mat2>& gens, std::uint32_t n, std::size_t cap) {
    Subgroup h(n, gens, cap);
    h.order();
    return h;
}

std::vector<std::uint32_t> unit_generators(std::uint32_t n, std::uint32_t m) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t u : units(n))
        if (u % m == 1 % m) pool.push_back(u);
    std::vector<std::uint32_t> gens;
    std::vector<char> in(n, 0);
    std::vector<std::uint32_t> cur{1 % n};
    in[1 % n] = 1;
    for (std::uint32_t u : pool) {
        if (cur.size() == pool.size()) break;
        if (in[u]) continue;
        gens.push_back(u);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            std::uint32_t v = std::uint32_t(std::uint64_t(cur[i]) * u % n);
            if (!in[v]) {
                in[v] = 1;
                cur.push_back(v);
            }
        }
    }
    return gens;
}

Subgroup gl2_group(std::uint32_t n) {
    std::vector<Mat2> g{Mat2(n, 1, 1, 0, 1), Mat2(n, 0, -1, 1, 0)};
    for (std::uint32_t u : unit_generators(n)) g.emplace_back(n, u, 0, 0, 1);
    Subgroup h(n, g);
    h.set_label("GL2(Z/" + std::to_string(n) + ")");
    return h;
}

Subgroup sl2_group(std::uint32_t n) {
    Subgroup h(n, {Mat2(n, 1, 1, 0, 1), Mat2(n, 0, -1, 1, 0)});
    h.set_label("SL2(Z/" + std::to_string(n) + ")");
    return h;
}

Subgroup reduce(const Subgroup& h, std::uint32_t m) {
    std::vector<Mat2> g;
    for (const Mat2& x : h.generators()) g.push_back(reduce(x, m));
    if (h.modulus() % m) throw NotADivisor(std::to_string(m) + " does not divide " + std::to_string(h.modulus()));
    return Subgroup(m, std::move(g), h.cap());
}

Subgroup conjugate_by(const Subgroup& h, const Mat2& x) {
    Mat2 xi = inv(x);
    std::vector<Mat2> g;
    for (const Mat2& y : h.generators()) g.push_back(mul(mul(x, y), xi));
    return Subgroup(h.modulus(), std::move(g), h.cap());
}

bool is_subgroup_of(const Subgroup& a, const Subgroup& b) {
    if (a.modulus() != b.modulus()) throw ModulusMismatch("subgroup test across moduli");
    for (const Mat2& g : a.generators())
        if (!b.contains(g)) return false;
    return true;
}

bool same_group(const Subgroup& a, const Subgroup& b) {
    return a.modulus() == b.modulus() && a.order() == b.order() && is_subgroup_of(a, b);
}

// ------------------------------------------------------- structural tests

bool contains_minus_id(const Subgroup& h) { return h.contains(Mat2::minus_identity(h.modulus())); }

std::vector<std::uint32_t> det_image(const Subgroup& h) {
    // det is a homomorphism, so the image is generated by the generator dets.
    std::uint32_t n = h.modulus();
    std::vector<char> in(n, 0);
    std::vector<std::uint32_t> cur{1 % n};
    in[1 % n] = 1;
    for (const Mat2& g : h.generators()) {
        std::uint32_t u = det(g);
        if (in[u]) continue;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            std::uint32_t v = std::uint32_t(std::uint64_t(cur[i]) * u % n);
            if (!in[v]) {
                in[v] = 1;
                cur.push_back(v);
            }
        }
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

bool det_image_is_full(const Subgroup& h) { return det_image(h).size() == euler_phi(h.modulus()); }

namespace {

// Union of the GL2(Z/qZ)-classes of diag(1,-1) and [[1,1],[0,-1]], q = 2^k.
const PackedSet& conjugation_classes_2adic(std::uint32_t q) {
    static std::mutex mu;
    static std::unordered_map<std::uint32_t, std::unique_ptr<PackedSet>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return *it->second;
    std::vector<std::uint64_t> conj;
    std::vector<std::uint64_t> conj_inv;
    for (const Mat2& x : {Mat2(q, 1, 1, 0, 1), Mat2(q, 0, -1, 1, 0), Mat2(q, -1, 0, 0, 1),
                          Mat2(q, 5, 0, 0, 1), Mat2(q, 3, 0, 0, 1)}) {
        conj.push_back(x.key());
        conj_inv.push_back(inv(x).key());
    }
    auto set = std::make_unique<PackedSet>();
    std::vector<std::uint64_t> queue;
    for (const Mat2& r : {Mat2(q, 1, 0, 0, -1), Mat2(q, 1, 1, 0, -1)})
        if (set->insert(r.key())) queue.push_back(r.key());
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (std::size_t i = 0; i < conj.size(); ++i) {
            std::uint64_t y = mul(mul(conj[i], queue[head], q), conj_inv[i], q);
            if (set->insert(y)) queue.push_back(y);
        }
    }
    const PackedSet& ref = *set;
    cache.emplace(q, std::move(set));
    return ref;
}

}  // namespace

bool has_complex_conjugation(const Subgroup& h) {
    std::uint32_t n = h.modulus();
    std::uint32_t q = 1;
    while (n % (2 * q) == 0) q *= 2;
    const std::uint64_t id = identity(n);
    const std::uint32_t minus_one = (n - 1) % n;
    const PackedSet* classes = q > 1 ? &conjugation_classes_2adic(q) : nullptr;
    for (std::uint64_t z : h.keys()) {
        if (det(z, n) != minus_one) continue;
        if (mul(z, z, n) != id) continue;
        // Odd components: z^2 = 1 with det -1 forces eigenvalues 1, -1.
        if (!classes) return true;
        std::uint64_t z2 = pack(ka(z) % q, kb(z) % q, kc(z) % q, kd(z) % q);
        if (classes->contains(z2)) return true;
    }
    return false;
}

// ------------------------------------------------------------ level etc.

std::uint32_t level(const Subgroup& h) {
    const std::uint32_t n = h.modulus();
    const std::uint64_t full = gl2_order(n);
    const std::uint64_t ord = h.order();
    for (std::uint32_t m : divisors(n)) {
        if (m == n) return n;
        std::uint64_t ker = full / gl2_order(m);
        if (ord % ker) continue;
        if (reduce(h, m).order() * ker == ord) return m;
    }
    return n;
}

Subgroup preimage(const Subgroup& h, std::uint32_t target) {
    const std::uint32_t m = h.modulus();
    if (target % m) throw NotADivisor(std::to_string(m) + " does not divide " + std::to_string(target));
    if (target == m) return h;
    std::vector<Mat2> g;
    for (const Mat2& x : h.generators()) g.push_back(lift(x, target));
    g.emplace_back(target, 1, m, 0, 1);
    g.emplace_back(target, 1, 0, m, 1);
    for (std::uint32_t u : unit_generators(target, m)) {
        g.emplace_back(target, u, 0, 0, 1);
        g.emplace_back(target, 1, 0, 0, u);
    }
    Subgroup p(target, std::move(g), h.cap());
    p.order();
    return p;
}

Subgroup product_group(const Subgroup& a, const Subgroup& b) {
    const std::uint32_t m = a.modulus(), n = b.modulus();
    if (gcd(m, n) != 1)
        throw NonCoprimeModuli("product of groups mod " + std::to_string(m) + " and " + std::to_string(n));
    std::vector<Mat2> g;
    for (const Mat2& x : a.generators()) g.push_back(crt_combine(x, Mat2::identity(n)));
    for (const Mat2& y : b.generators()) g.push_back(crt_combine(Mat2::identity(m), y));
    Subgroup p(m * n, std::move(g), std::max(a.cap(), b.cap()));
    if (a.label() && b.label()) p.set_label(*a.label() + "*" + *b.label());
    return p;
}

// ------------------------------------------------------------- conjugacy

Fingerprint fingerprint(const Subgroup& h) {
    Fingerprint f;
    const std::uint32_t n = h.modulus();
    f.order = h.order();
    f.dets = det_image(h);
    for (std::uint64_t x : h.keys()) ++f.classes[{trace(x, n), det(x, n), order(x, n)}];
    return f;
}

namespace {

// First x in GL2(Z/n) (lexicographic) with x g x^-1 in h2 for every generator g of h1.
std::optional<Mat2> scan_conjugators(const Subgroup& h1, const Subgroup& h2) {
    const std::uint32_t n = h1.modulus();
    if (n > kConjugacyMaxModulus)
        throw CapExceeded("conjugator scan limited to modulus " + std::to_string(kConjugacyMaxModulus), 0);
    std::vector<std::uint64_t> g;
    for (const Mat2& x : h1.generators()) g.push_back(x.key());
    std::vector<std::uint32_t> uinv(n, 0);
    std::vector<char> unit(n, 0);
    for (std::uint32_t u : units(n)) {
        unit[u] = 1;
        uinv[u] = inv_mod(u, n);
    }
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            for (std::uint32_t c = 0; c < n; ++c)
                for (std::uint32_t d = 0; d < n; ++d) {
                    std::uint64_t x = pack(a, b, c, d);
                    std::uint32_t dt = det(x, n);
                    if (!unit[dt]) continue;
                    std::uint64_t xi = inv_with(x, n, uinv[dt]);
                    bool ok = true;
                    for (std::uint64_t y : g)
                        if (!h2.contains_key(mul(mul(x, y, n), xi, n))) {
                            ok = false;
                            break;
                        }
                    if (ok) return Mat2::from_key(n, x);
                }
    return std::nullopt;
}

}  // namespace

std::optional<Mat2> are_conjugate(const Subgroup& h1, const Subgroup& h2) {
    const std::uint32_t n = h1.modulus();
    if (h2.modulus() != n) throw ModulusMismatch("conjugacy test across moduli");
    if (h1.order() != h2.order()) return std::nullopt;
    if (same_group(h1, h2)) return Mat2::identity(n);
    if (n > kConjugacyMaxModulus)
        throw CapExceeded("conjugator scan limited to modulus " + std::to_string(kConjugacyMaxModulus), 0);
    if (det_image(h1) != det_image(h2)) return std::nullopt;
    if (!(fingerprint(h1) == fingerprint(h2))) return std::nullopt;
    return scan_conjugators(h1, h2);
}

std::optional<Mat2> conjugate_into(const Subgroup& h1, const Subgroup& h2) {
    const std::uint32_t n = h1.modulus();
    if (h2.modulus() != n) throw ModulusMismatch("containment test across moduli");
    if (h2.order() % h1.order()) return std::nullopt;
    if (is_subgroup_of(h1, h2)) return Mat2::identity(n);
    return scan_conjugators(h1, h2);
}

// ---------------------------------------------------- low-index subgroups

namespace {

std::uint8_t inv_p(std::uint8_t a, unsigned p) {
    for (std::uint8_t x = 1; x < p; ++x)
        if ((a * x) % p == 1) return x;
    return 0;
}

// Reduced row echelon form over F_p, p prime and small.
class Echelon {
public:
    Echelon(unsigned p, std::size_t r) : p_(p), r_(r) {}

    std::size_t rank() const { return rows_.size(); }
    bool full() const { return rows_.size() == r_; }

    void add(std::vector<std::uint8_t> v) {
        if (full()) return;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            std::uint8_t f = v[piv_[i]];
            if (f) axpy(v, rows_[i], std::uint8_t(p_ - f));
        }
        std::size_t c = 0;
        while (c < r_ && !v[c]) ++c;
        if (c == r_) return;
        std::uint8_t s = inv_p(v[c], p_);
        for (auto& x : v) x = std::uint8_t(x * s % p_);
        for (auto& row : rows_) {
            std::uint8_t f = row[c];
            if (f) axpy(row, v, std::uint8_t(p_ - f));
        }
        rows_.push_back(std::move(v));
        piv_.push_back(c);
    }

    // Basis of {w : row . w = 0 for every row}.
    std::vector<std::vector<std::uint8_t>> nullspace() const {
        std::vector<char> is_piv(r_, 0);
        for (std::size_t c : piv_) is_piv[c] = 1;
        std::vector<std::vector<std::uint8_t>> out;
        for (std::size_t f = 0; f < r_; ++f) {
            if (is_piv[f]) continue;
            std::vector<std::uint8_t> w(r_, 0);
            w[f] = 1;
            for (std::size_t i = 0; i < rows_.size(); ++i)
                w[piv_[i]] = std::uint8_t((p_ - rows_[i][f]) % p_);
            out.push_back(std::move(w));
        }
        return out;
    }

private:
    void axpy(std::vector<std::uint8_t>& v, const std::vector<std::uint8_t>& row, std::uint8_t f) const {
        for (std::size_t j = 0; j < r_; ++j) v[j] = std::uint8_t((v[j] + f * row[j]) % p_);
    }

    unsigned p_;
    std::size_t r_;
    std::vector<std::vector<std::uint8_t>> rows_;
    std::vector<std::size_t> piv_;
};

// Breadth-first traversal of a group that records, for every element, the
// exponent vector mod p of a word in the generators reaching it. Non-tree
// edges give the relations cutting out Hom(H, F_p).
struct HomTable {
    std::uint32_t n = 0;
    unsigned p = 0;
    std::size_t r = 0;
    std::vector<std::uint64_t> gens;
    std::vector<std::uint64_t> keys;
    PackedMap index;
    std::vector<std::uint8_t> labels;
    std::vector<std::vector<std::uint8_t>> homs;

    std::uint8_t eval(const std::vector<std::uint8_t>& w, std::uint32_t idx) const {
        unsigned s = 0;
        const std::uint8_t* l = &labels[std::size_t(idx) * r];
        for (std::size_t j = 0; j < r; ++j) s += l[j] * w[j];
        return std::uint8_t(s % p);
    }

    std::uint8_t eval_key(const std::vector<std::uint8_t>& w, std::uint64_t k) const {
        std::uint32_t idx = index.get(k);
        if (idx == PackedMap::kMissing) throw Error("element outside the traversed group");
        return eval(w, idx);
    }
};

HomTable build_hom_table(const std::vector<Mat2>& gens, std::uint32_t n, unsigned p,
                         std::size_t expected) {
    HomTable t;
    t.n = n;
    t.p = p;
    t.r = gens.size();
    for (const Mat2& g : gens) t.gens.push_back(g.key());
    t.index.reserve(expected);
    t.keys.reserve(expected);
    t.labels.reserve(expected * t.r);
    Echelon rel(p, t.r);
    std::uint64_t id = identity(n);
    t.index.emplace(id, 0);
    t.keys.push_back(id);
    t.labels.assign(t.r, 0);
    std::vector<std::uint8_t> v(t.r);
    for (std::size_t head = 0; head < t.keys.size(); ++head) {
        std::uint64_t x = t.keys[head];
        for (std::size_t j = 0; j < t.r; ++j) {
            std::uint64_t y = mul(x, t.gens[j], n);
            std::uint32_t fresh = std::uint32_t(t.keys.size());
            std::uint32_t idx = t.index.emplace(y, fresh);
            if (idx == fresh) {
                t.keys.push_back(y);
                for (std::size_t i = 0; i < t.r; ++i) t.labels.push_back(t.labels[head * t.r + i]);
                std::uint8_t& c = t.labels[std::size_t(fresh) * t.r + j];
                c = std::uint8_t((c + 1) % p);
            } else if (!rel.full()) {
                for (std::size_t i = 0; i < t.r; ++i)
                    v[i] = std::uint8_t((t.labels[head * t.r + i] + (i == j ? 1 : 0) +
                                         p - t.labels[std::size_t(idx) * t.r + i]) % p);
                rel.add(v);
            }
        }
    }
    t.homs = rel.nullspace();
    return t;
}

std::vector<std::uint8_t> combine(const std::vector<std::vector<std::uint8_t>>& basis,
                                  const std::vector<std::uint8_t>& coeff, std::size_t r, unsigned p) {
    std::vector<std::uint8_t> w(r, 0);
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < r; ++i) w[i] = std::uint8_t((w[i] + coeff[j] * basis[j][i]) % p);
    return w;
}

// Nonzero coefficient vectors in F_p^k; with projective set, only those
// whose first nonzero entry is 1.
std::vector<std::vector<std::uint8_t>> coefficient_vectors(std::size_t k, unsigned p, bool projective) {
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> c(k, 0);
    while (true) {
        std::size_t i = 0;
        while (i < k && c[i] == p - 1) c[i++] = 0;
        if (i == k) break;
        ++c[i];
        std::size_t f = 0;
        while (f < k && !c[f]) ++f;
        if (projective && c[f] != 1) continue;
        out.push_back(c);
    }
    return out;
}

std::vector<Mat2> schreier_generators(const std::vector<std::uint64_t>& gens, std::uint32_t n,
                                      const PackedSet& k, const std::vector<std::uint64_t>& reps) {
    std::vector<std::uint64_t> rinv;
    for (std::uint64_t r : reps) rinv.push_back(inv(r, n));
    const std::uint64_t id = identity(n);
    std::vector<Mat2> out;
    PackedSet seen;
    for (std::uint64_t r : reps)
        for (std::uint64_t g : gens) {
            std::uint64_t x = mul(r, g, n);
            for (std::uint64_t ri : rinv) {
                std::uint64_t s = mul(x, ri, n);
                if (!k.contains(s)) continue;
                if (s != id && seen.insert(s)) out.push_back(Mat2::from_key(n, s));
                break;
            }
        }
    return out;
}

Subgroup make_subgroup(std::uint32_t n, std::vector<std::uint64_t> keys,
                       const std::vector<std::uint64_t>& parent_gens, const std::vector<std::uint64_t>& reps) {
    PackedSet set(keys.size());
    for (std::uint64_t k : keys) set.insert(k);
    std::vector<Mat2> gens = schreier_generators(parent_gens, n, set, reps);
    return Subgroup::from_elements(n, std::move(keys), std::move(gens));
}

std::uint64_t power_key(std::uint64_t x, unsigned e, std::uint32_t n) {
    std::uint64_t r = identity(n);
    for (unsigned i = 0; i < e; ++i) r = mul(r, x, n);
    return r;
}

// Kernels of the nonzero homomorphisms H -> F_p, one per kernel.
void visit_normal(const HomTable& t, const std::function<void(const Subgroup&, const HomTable&,
                                                              const std::vector<std::uint8_t>&)>& visit) {
    const unsigned p = t.p;
    for (const auto& c : coefficient_vectors(t.homs.size(), p, true)) {
        std::vector<std::uint8_t> w = combine(t.homs, c, t.r, p);
        std::vector<std::uint64_t> keys;
        for (std::uint32_t i = 0; i < t.keys.size(); ++i)
            if (t.eval(w, i) == 0) keys.push_back(t.keys[i]);
        std::uint64_t g = 0;
        unsigned v = 0;
        for (std::size_t j = 0; j < t.r && !v; ++j) {
            v = t.eval_key(w, t.gens[j]);
            g = t.gens[j];
        }
        std::vector<std::uint64_t> reps{identity(t.n)};
        for (unsigned e = 1; e < p; ++e) reps.push_back(power_key(g, e, t.n));
        visit(make_subgroup(t.n, std::move(keys), t.gens, reps), t, w);
    }
}

void visit_nonnormal_index3(const Subgroup& h, const HomTable& t2,
                            const std::function<void(const Subgroup&)>& visit) {
    const std::uint32_t n = h.modulus();
    visit_normal(t2, [&](const Subgroup& h2, const HomTable&, const std::vector<std::uint8_t>& phi) {
        std::uint64_t tt = 0;
        for (std::size_t j = 0; j < t2.r; ++j)
            if (t2.eval_key(phi, t2.gens[j])) {
                tt = t2.gens[j];
                break;
            }
        const std::uint64_t ti = inv(tt, n);
        HomTable t3 = build_hom_table(h2.generators(), n, 3, h2.order());
        const std::size_t k = t3.homs.size();
        if (k == 0) return;
        // psi(t g t^-1) = -psi(g) on the generators of h2.
        Echelon cond(3, k);
        for (const Mat2& g : h2.generators()) {
            std::uint64_t gc = mul(mul(tt, g.key(), n), ti, n);
            std::vector<std::uint8_t> row(k);
            for (std::size_t j = 0; j < k; ++j)
                row[j] = std::uint8_t((t3.eval_key(t3.homs[j], gc) + t3.eval_key(t3.homs[j], g.key())) % 3);
            cond.add(row);
        }
        auto anti = cond.nullspace();
        for (const auto& c : coefficient_vectors(anti.size(), 3, true)) {
            std::vector<std::uint8_t> coeff = combine(anti, c, k, 3);
            std::vector<std::uint8_t> psi = combine(t3.homs, coeff, t3.r, 3);
            for (std::uint8_t want = 0; want < 3; ++want) {
                std::vector<std::uint64_t> keys;
                for (std::uint32_t i = 0; i < t3.keys.size(); ++i)
                    if (t3.eval(psi, i) == 0) keys.push_back(t3.keys[i]);
                for (std::uint64_t x : h.keys()) {
                    if (h2.contains_key(x)) continue;
                    if (t3.eval_key(psi, mul(ti, x, n)) == want) keys.push_back(x);
                }
                PackedSet set(keys.size());
                for (std::uint64_t x : keys) set.insert(x);
                std::vector<std::uint64_t> reps{identity(n)};
                for (std::uint64_t y : h.keys()) {
                    if (set.contains(y)) continue;
                    if (reps.size() == 2 && set.contains(mul(y, inv(reps[1], n), n))) continue;
                    reps.push_back(y);
                    if (reps.size() == 3) break;
                }
                std::vector<std::uint64_t> hg;
                for (const Mat2& g : h.generators()) hg.push_back(g.key());
                visit(make_subgroup(n, std::move(keys), hg, reps));
            }
        }
    });
}

}  // namespace

void for_each_subgroup_of_index(const Subgroup& h, unsigned n,
                                const std::function<void(const Subgroup&)>& visit) {
    if (n != 2 && n != 3) throw std::invalid_argument("index must be 2 or 3");
    HomTable t = build_hom_table(h.generators(), h.modulus(), n, h.order());
    if (t.keys.size() != h.order()) throw Error("generator traversal disagrees with group order");
    visit_normal(t, [&](const Subgroup& k, const HomTable&, const std::vector<std::uint8_t>&) { visit(k); });
    if (n == 3) {
        HomTable t2 = build_hom_table(h.generators(), h.modulus(), 2, h.order());
        visit_nonnormal_index3(h, t2, visit);
    }
}

std::vector<Subgroup> subgroups_of_index(const Subgroup& h, unsigned n) {
    std::vector<Subgroup> out;
    for_each_subgroup_of_index(h, n, [&](const Subgroup& k) { out.push_back(k); });
    return out;
}

std::vector<Subgroup> quadratic_twists(const Subgroup& h) {
    const std::uint32_t n = h.modulus();
    if (n < 3) throw PreconditionViolated("quadratic twists need modulus >= 3");
    std::vector<Mat2> g = h.generators();
    const Mat2 mi = Mat2::minus_identity(n);
    if (!h.contains(mi)) g.push_back(mi);
    Subgroup big(n, g, h.cap());
    std::vector<Subgroup> out{big};
    for_each_subgroup_of_index(big, 2, [&](const Subgroup& k) {
        if (!k.contains(mi)) out.push_back(k);
    });
    return out;
}

}  // namespace gl2
