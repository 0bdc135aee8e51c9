#include "gl2/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <sstream>
#include <thread>

#include "gl2/arith.hpp"
#include "gl2/errors.hpp"

namespace gl2 {

std::string to_string(Status s) {
    switch (s) {
        case Status::NotApplicable: return "NOT_APPLICABLE";
        case Status::NotCuriousGenusGe2: return "NOT_CURIOUS_GENUS_GE_2";
        case Status::NotCuriousGenus0: return "NOT_CURIOUS_GENUS_0";
        case Status::NotCuriousRank0: return "NOT_CURIOUS_RANK_0";
        case Status::NotCuriousPigeonhole: return "NOT_CURIOUS_PIGEONHOLE";
        case Status::NotCuriousWitnessCurve: return "NOT_CURIOUS_WITNESS_CURVE";
        case Status::Curious: return "CURIOUS";
        case Status::UnknownNeedsData: return "UNKNOWN_NEEDS_DATA";
    }
    return "?";
}

std::string Verdict::line() const {
    std::ostringstream os;
    os << name << " status=" << to_string(status) << " level=" << inv.level << " index=" << inv.index;
    if (inv.admissible) os << " genus=" << inv.genus;
    if (key != name) os << " product=" << key;
    os << " evidence=\"" << evidence << '"';
    return os.str();
}

std::vector<Verdict> ClassifyReport::curious() const {
    std::vector<Verdict> out;
    for (const Verdict& v : verdicts)
        if (v.status == Status::Curious) out.push_back(v);
    return out;
}

std::size_t ClassifyReport::count(Status s) const {
    return std::count_if(verdicts.begin(), verdicts.end(), [&](const Verdict& v) { return v.status == s; });
}

bool label_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i])), db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            // Compare digit runs by value; leading zeros do not occur in labels.
            if (ie - i != je - j) return ie - i < je - j;
            int c = a.compare(i, ie - i, b, j, je - j);
            if (c) return c < 0;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

namespace {

std::uint32_t prime_of(std::uint32_t n) {
    auto f = factor(n);
    return f.size() == 1 ? static_cast<std::uint32_t>(f[0].first) : 0;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
    return s;
}

Subgroup at_modulus(const Subgroup& h, std::uint32_t n) { return h.modulus() == n ? h : preimage(h, n); }

}  // namespace

Classifier::Classifier(const Registries& reg, ClassifierOptions opts) : reg_(reg), opts_(opts) {
    if (opts_.jobs == 0) opts_.jobs = 1;
}

const Classifier::Factor& Classifier::factor(const std::string& label) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = factors_.find(label);
        if (it != factors_.end()) return *it->second;
    }
    const GroupEntry& e = reg_.group(label);
    auto f = std::make_shared<Factor>(Factor{e.group(), prime_of(e.modulus), {}, std::nullopt});
    if (!f->prime) throw PreconditionViolated(label + " is not of prime-power level");
    f->inv = compute_invariants(f->group);
    if (f->inv.admissible) f->action = coset_action(f->group);
    std::lock_guard<std::mutex> lock(mu_);
    return *factors_.emplace(label, f).first->second;
}

void Classifier::build_aliases() {
    std::call_once(aliases_once_, [&] {
        for (const GroupEntry& e : reg_.groups) {
            auto parts = gl2::factor(e.modulus);
            if (parts.size() < 2) continue;
            Subgroup h = e.group();
            std::size_t prod = 1;
            std::vector<std::string> labels;
            for (auto [p, k] : parts) {
                std::uint32_t q = 1;
                for (unsigned i = 0; i < k; ++i) q *= static_cast<std::uint32_t>(p);
                Subgroup r = reduce(h, q);
                prod *= r.order();
                std::string found;
                for (const GroupEntry& f : reg_.groups) {
                    if (prime_of(f.modulus) != p || q % f.modulus) continue;
                    Subgroup l = at_modulus(f.group(), q);
                    if (l.order() != r.order()) continue;
                    if (are_conjugate(r, l)) {
                        found = f.label;
                        break;
                    }
                }
                if (found.empty()) break;
                labels.push_back(found);
            }
            if (labels.size() != parts.size() || prod != h.order()) continue;
            std::string key = join(labels);
            alias_key_[e.label] = key;
            auto [it, fresh] = key_name_.emplace(key, e.label);
            if (!fresh)
                throw ValidationError("registry groups " + it->second + " and " + e.label +
                                      " are both conjugate to " + key);
        }
    });
}

std::string Classifier::canonical_key(const std::string& ref) {
    build_aliases();
    std::vector<std::string> out;
    for (const std::string& part : Registries::split_ref(ref)) {
        reg_.group(part);
        auto it = alias_key_.find(part);
        if (it == alias_key_.end()) {
            out.push_back(part);
        } else {
            for (auto& f : Registries::split_ref(it->second)) out.push_back(f);
        }
    }
    if (out.size() > 1) {
        for (const std::string& f : out)
            if (!prime_of(reg_.group(f).modulus))
                throw PreconditionViolated("product factor " + f + " is not of prime-power level");
        std::stable_sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
            return prime_of(reg_.group(a).modulus) < prime_of(reg_.group(b).modulus);
        });
        for (std::size_t i = 1; i < out.size(); ++i)
            if (prime_of(reg_.group(out[i]).modulus) == prime_of(reg_.group(out[i - 1]).modulus))
                throw NonCoprimeModuli("product " + ref + " repeats a prime");
    }
    return join(out);
}

Candidate Classifier::candidate_for(const std::string& ref) {
    Candidate c;
    c.key = canonical_key(ref);
    c.factors = Registries::split_ref(c.key);
    auto it = key_name_.find(c.key);
    c.name = it == key_name_.end() ? c.key : it->second;
    return c;
}

Subgroup Classifier::group(const Candidate& c) const { return reg_.resolve(c.key); }

CurveInvariants Classifier::invariants(const Candidate& c) {
    if (c.factors.size() == 1) {
        const GroupEntry& e = reg_.group(c.factors[0]);
        if (prime_of(e.modulus)) return factor(e.label).inv;
        return compute_invariants(e.group());
    }
    CurveInvariants inv;
    inv.level = 1;
    inv.index = 1;
    inv.admissible = true;
    std::optional<CosetAction> act;
    for (const std::string& l : c.factors) {
        const Factor& f = factor(l);
        inv.level *= f.inv.level;
        inv.index *= f.inv.index;
        inv.admissible = inv.admissible && f.inv.admissible;
        if (!inv.admissible) continue;
        act = act ? product_action(*act, *f.action) : *f.action;
    }
    if (inv.admissible) {
        GenusData g = genus_from_action(*act);
        inv.genus = g.genus;
        inv.nu2 = g.nu2;
        inv.nu3 = g.nu3;
        inv.cusps = g.cusps;
    }
    return inv;
}

std::vector<Candidate> Classifier::enumerate_candidates(const std::vector<std::uint32_t>& primes_in) {
    std::vector<std::uint32_t> primes = primes_in;
    std::sort(primes.begin(), primes.end());
    if (primes.empty() || primes.size() > 2 || std::adjacent_find(primes.begin(), primes.end()) != primes.end())
        throw PreconditionViolated("classify takes one prime or two distinct primes");
    for (std::uint32_t p : primes)
        if (std::find(std::begin(kSupportedPrimes), std::end(kSupportedPrimes), p) == std::end(kSupportedPrimes))
            throw UnknownPrime("no registry data for the prime " + std::to_string(p));

    std::vector<std::vector<std::string>> lists;
    for (std::uint32_t p : primes) {
        std::vector<std::string> list;
        for (const GroupEntry& e : reg_.groups) {
            if (prime_of(e.modulus) != p) continue;
            const Factor& f = factor(e.label);
            if (!f.inv.admissible || f.inv.genus > 1) continue;
            bool dup = false;
            for (const std::string& kept : list) {
                const Factor& k = factor(kept);
                std::uint32_t n = std::max(k.group.modulus(), f.group.modulus());
                if (are_conjugate(at_modulus(k.group, n), at_modulus(f.group, n))) {
                    dup = true;
                    break;
                }
            }
            if (!dup) list.push_back(e.label);
        }
        lists.push_back(list);
    }

    std::vector<Candidate> out;
    if (lists.size() == 1) {
        for (auto& a : lists[0]) out.push_back(candidate_for(a));
    } else {
        for (auto& a : lists[0])
            for (auto& b : lists[1]) out.push_back(candidate_for(a + "*" + b));
    }
    return out;
}

std::optional<unsigned> Classifier::xh_rank(const XhFact& x, bool required) const {
    if (x.curve != "-") {
        if (const CurveEntry* c = reg_.find_curve(x.curve)) return c->rank;
    }
    if (x.rank) return x.rank;
    if (required)
        throw MissingCurveData("modular curve of " + x.group + " is " + x.curve +
                               ", which is absent from the curve registry");
    return std::nullopt;
}

bool Classifier::factor_conjugate_into(const std::string& a, const std::string& b) {
    auto key = std::make_pair(a, b);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = into_.find(key);
        if (it != into_.end()) return it->second;
    }
    const Factor& fa = factor(a);
    const Factor& fb = factor(b);
    bool r = false;
    if (fa.prime == fb.prime) {
        std::uint32_t n = std::max(fa.group.modulus(), fb.group.modulus());
        r = conjugate_into(at_modulus(fa.group, n), at_modulus(fb.group, n)).has_value();
    }
    std::lock_guard<std::mutex> lock(mu_);
    into_[key] = r;
    return r;
}

std::optional<std::string> Classifier::rank0_cover(const Candidate& c) {
    for (const XhFact& x : reg_.facts.xh) {
        auto r = xh_rank(x, false);
        if (!r || *r != 0) continue;
        Candidate t = candidate_for(x.group);
        if (t.key == c.key || t.factors.size() != c.factors.size()) continue;
        bool inside = true;
        for (std::size_t i = 0; i < c.factors.size() && inside; ++i) {
            if (!prime_of(reg_.group(c.factors[i]).modulus) || !prime_of(reg_.group(t.factors[i]).modulus)) {
                inside = false;
                break;
            }
            inside = factor_conjugate_into(c.factors[i], t.factors[i]);
        }
        if (inside)
            return "contained in " + t.name + ", whose modular curve " + (x.curve == "-" ? "" : x.curve + " ") +
                   "has rank 0, so only finitely many rational points";
    }
    return std::nullopt;
}

std::optional<std::string> Classifier::low_genus_subgroup(const Candidate& c) {
    Subgroup g = group(c);
    std::optional<std::string> found;
    for (unsigned n : {2u, 3u}) {
        std::size_t seen = 0;
        for_each_subgroup_of_index(g, n, [&](const Subgroup& k) {
            ++seen;
            if (found || !is_admissible(k)) return;
            std::uint64_t genus = genus_from_action(coset_action(k)).genus;
            if (genus <= 1)
                found = "index-" + std::to_string(n) + " subgroup #" + std::to_string(seen) + " is admissible of genus " +
                        std::to_string(genus);
        });
        if (found) break;
    }
    return found;
}

Verdict Classifier::curiosity_status(const Candidate& c) { return status_impl(c, 0); }

Verdict Classifier::status_impl(const Candidate& c, unsigned depth) {
    Verdict v;
    v.name = c.name;
    v.key = c.key;
    v.inv = invariants(c);
    const CurveInvariants& inv = v.inv;
    auto done = [&](Status s, std::string e) {
        v.status = s;
        v.evidence = std::move(e);
        return v;
    };

    if (!inv.admissible) {
        std::string why;
        for (const std::string& f : c.factors) {
            Subgroup h = reg_.group(f).group();
            if (!contains_minus_id(h)) why += f + " lacks -Id; ";
            else if (!det_image_is_full(h)) why += f + " has a proper determinant image; ";
            else if (!has_complex_conjugation(h)) why += f + " has no complex-conjugation element; ";
        }
        if (why.size() > 2) why.resize(why.size() - 2);
        return done(Status::NotApplicable, "not admissible: " + why);
    }
    if (inv.genus >= 2)
        return done(Status::NotCuriousGenusGe2,
                    "genus " + std::to_string(inv.genus) + ": finitely many rational points (Faltings)");
    if (inv.genus == 0)
        return done(Status::NotCuriousGenus0, "genus 0 with a rational point: Hilbert irreducibility gives curves "
                                              "with image exactly H");

    const XhFact* own = nullptr;
    auto curve_name = [](const XhFact& x) {
        return x.curve == "-" ? std::string("(unregistered model)") : x.curve;
    };
    for (const XhFact& x : reg_.facts.xh)
        if (canonical_key(x.group) == c.key) {
            own = &x;
            break;
        }
    if (own) {
        auto r = xh_rank(*own, false);
        if (r && *r == 0)
            return done(Status::NotCuriousRank0,
                        "genus 1, modular curve " + curve_name(*own) +
                            " has rank 0: finitely many rational points");
    }
    if (auto cover = rank0_cover(c)) return done(Status::NotCuriousRank0, *cover);

    for (const WitnessFact& w : reg_.facts.witnesses)
        if (canonical_key(w.group) == c.key)
            return done(Status::NotCuriousWitnessCurve,
                        "mod-" + std::to_string(w.modulus) + " image of " + w.curve + " is conjugate to H");

    auto low = low_genus_subgroup(c);
    if (!low)
        return done(Status::NotCuriousPigeonhole,
                    "genus 1 and no admissible subgroup of index 2 or 3 has genus <= 1 (pigeonhole)");

    for (const CuriousFact& f : reg_.facts.curious) {
        if (canonical_key(f.group) != c.key) continue;
        if (!own) throw MissingCurveData("curious attestation for " + c.name + " without a modular-curve record");
        unsigned r = *xh_rank(*own, true);
        if (r == 0) throw ValidationError(c.name + " is attested curious but its modular curve has rank 0");
        return done(Status::Curious, "genus 1, modular curve " + curve_name(*own) + " of rank " + std::to_string(r) + "; " +
                                         *low + "; covering-family attestation" +
                                         (f.note.empty() ? std::string() : ": " + f.note));
    }

    for (const EquivFact& e : reg_.facts.equiv) {
        if (canonical_key(e.group) != c.key) continue;
        if (depth > 4) throw ValidationError("equivalence rules form a cycle at " + c.name);
        Verdict t = status_impl(candidate_for(e.target), depth + 1);
        return done(t.status, "same verdict as " + t.name + " [" + t.evidence + "]");
    }

    return done(Status::UnknownNeedsData, "genus 1 with an admissible low-genus subgroup (" + *low +
                                              ") and no rank, witness or attestation record");
}

ClassifyReport Classifier::classify(const std::vector<std::uint32_t>& primes) {
    ClassifyReport rep;
    rep.primes = primes;
    std::sort(rep.primes.begin(), rep.primes.end());
    std::vector<Candidate> cands = enumerate_candidates(primes);
    rep.verdicts.resize(cands.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (std::size_t i; (i = next++) < cands.size();) {
            try {
                rep.verdicts[i] = curiosity_status(cands[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    unsigned jobs = std::min<std::size_t>(opts_.jobs, std::max<std::size_t>(cands.size(), 1));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);

    std::sort(rep.verdicts.begin(), rep.verdicts.end(),
              [](const Verdict& a, const Verdict& b) { return label_less(a.name, b.name); });
    return rep;
}

}  // namespace gl2
