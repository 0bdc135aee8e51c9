#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gl2/classify.hpp"
#include "gl2/errors.hpp"
#include "gl2/invariants.hpp"
#include "gl2/registry.hpp"
#include "gl2/subgroup.hpp"

namespace {

using namespace gl2;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

std::string gens_str(const Subgroup& h) {
    std::string s;
    for (std::size_t i = 0; i < h.generators().size(); ++i) s += (i ? ";" : "") + h.generators()[i].str();
    return s;
}

std::vector<std::uint32_t> parse_primes(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad prime list '" + text + "'", 0);
        out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subgroups of GL(2, Z/NZ), modular-curve invariants and the curious-group classifier"};
    app.require_subcommand(1);

    RegistryPaths paths = RegistryPaths::defaults();
    std::size_t cap = kDefaultCap;
    unsigned jobs = 1;
    app.add_option("--groups", paths.groups, "group registry file");
    app.add_option("--curves", paths.curves, "curve registry file");
    app.add_option("--witnesses", paths.facts, "facts file (witnesses, modular-curve records, attestations)");
    app.add_option("--cap", cap, "element cap for subgroup closures");
    app.add_option("--jobs", jobs, "worker threads for classify")->check(CLI::PositiveNumber);

    std::string label, left, right, a, b, primes;
    unsigned index = 2;
    bool only_admissible = false;
    int max_genus = -1;

    auto* genus_cmd = app.add_subcommand("genus", "genus, index and level of a group");
    auto* index_cmd = app.add_subcommand("index", "index in GL(2, Z/NZ)");
    auto* adm_cmd = app.add_subcommand("admissible", "arithmetic admissibility");
    auto* level_cmd = app.add_subcommand("level", "level of a group");
    for (auto* c : {genus_cmd, index_cmd, adm_cmd, level_cmd})
        c->add_option("--label", label, "registry label or product A*B")->required();

    auto* product_cmd = app.add_subcommand("product", "direct product of two registry groups");
    product_cmd->add_option("--left", left)->required();
    product_cmd->add_option("--right", right)->required();

    auto* subgroups_cmd = app.add_subcommand("subgroups", "subgroups of index 2 or 3");
    subgroups_cmd->add_option("--label", label)->required();
    subgroups_cmd->add_option("--index", index)->required()->check(CLI::IsMember({2u, 3u}));
    subgroups_cmd->add_flag("--admissible", only_admissible, "only admissible subgroups");
    subgroups_cmd->add_option("--max-genus", max_genus, "only admissible subgroups up to this genus");

    auto* twists_cmd = app.add_subcommand("twists", "quadratic twists of a group");
    twists_cmd->add_option("--label", label)->required();

    auto* conj_cmd = app.add_subcommand("conjugate", "conjugacy test");
    conj_cmd->add_option("--a", a)->required();
    conj_cmd->add_option("--b", b)->required();

    auto* status_cmd = app.add_subcommand("status", "curiosity verdict for one group");
    status_cmd->add_option("--label", label)->required();

    auto* classify_cmd = app.add_subcommand("classify", "classify products over one or two primes");
    classify_cmd->add_option("--primes", primes, "p or p,q")->required();

    auto* check_cmd = app.add_subcommand("check-labels", "label check over the group registry");
    auto* iso_cmd = app.add_subcommand("verify-isogenies", "verify the recorded 2-isogeny point images");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        // check-labels reports per entry instead of failing the load.
        Registries reg = load_registries(paths, Validation::Structure);
        auto resolve = [&](const std::string& ref) {
            for (const std::string& part : Registries::split_ref(ref))
                if (!reg.find_group(part)) throw ParseError("unknown group label " + part, 0);
            Subgroup h = reg.resolve(ref);
            return Subgroup(h.modulus(), h.generators(), cap);
        };

        if (genus_cmd->parsed()) {
            CurveInvariants inv = compute_invariants(resolve(label));
            std::cout << "genus=" << inv.genus << " index=" << inv.index << " level=" << inv.level << "\n";
        } else if (index_cmd->parsed()) {
            std::cout << "index=" << resolve(label).index() << "\n";
        } else if (level_cmd->parsed()) {
            std::cout << "level=" << level(resolve(label)) << "\n";
        } else if (adm_cmd->parsed()) {
            Subgroup h = resolve(label);
            std::cout << "admissible=" << (is_admissible(h) ? "true" : "false")
                      << " minus_id=" << (contains_minus_id(h) ? "true" : "false")
                      << " full_det=" << (det_image_is_full(h) ? "true" : "false")
                      << " complex_conjugation=" << (has_complex_conjugation(h) ? "true" : "false") << "\n";
        } else if (product_cmd->parsed()) {
            Subgroup h = resolve(left + "*" + right);
            CurveInvariants inv = compute_invariants(h);
            std::cout << "modulus=" << h.modulus() << " order=" << h.order() << " genus=" << inv.genus
                      << " index=" << inv.index << " level=" << inv.level
                      << " admissible=" << (inv.admissible ? "true" : "false") << "\n";
        } else if (subgroups_cmd->parsed()) {
            Subgroup h = resolve(label);
            std::size_t k = 0;
            for_each_subgroup_of_index(h, index, [&](const Subgroup& s) {
                ++k;
                bool adm = is_admissible(s);
                if ((only_admissible || max_genus >= 0) && !adm) return;
                std::ostringstream os;
                os << "#" << k << " order=" << s.order() << " admissible=" << (adm ? "true" : "false");
                if (adm) {
                    CurveInvariants inv = compute_invariants(s);
                    if (max_genus >= 0 && inv.genus > static_cast<std::uint64_t>(max_genus)) return;
                    os << " label=" << inv.level << '.' << inv.index << '.' << inv.genus;
                }
                os << " gens=" << gens_str(s);
                std::cout << os.str() << "\n";
            });
        } else if (twists_cmd->parsed()) {
            std::size_t k = 0;
            for (const Subgroup& t : quadratic_twists(resolve(label)))
                std::cout << "#" << ++k << " order=" << t.order()
                          << " minus_id=" << (contains_minus_id(t) ? "true" : "false") << " gens=" << gens_str(t)
                          << "\n";
        } else if (conj_cmd->parsed()) {
            Subgroup h1 = resolve(a), h2 = resolve(b);
            if (h1.modulus() != h2.modulus()) {
                std::uint32_t n = std::max(h1.modulus(), h2.modulus());
                if (n % h1.modulus() || n % h2.modulus()) throw ModulusMismatch("moduli do not divide each other");
                if (h1.modulus() != n) h1 = preimage(h1, n);
                if (h2.modulus() != n) h2 = preimage(h2, n);
            }
            auto x = are_conjugate(h1, h2);
            std::cout << "conjugate=" << (x ? "true" : "false");
            if (x) std::cout << " by=" << x->str();
            std::cout << "\n";
        } else if (status_cmd->parsed()) {
            Classifier cls(reg, {cap, jobs});
            Verdict v = cls.curiosity_status(label);
            std::cout << v.line() << "\n";
            return v.status == Status::UnknownNeedsData ? kVerifyFailed : kOk;
        } else if (classify_cmd->parsed()) {
            Classifier cls(reg, {cap, jobs});
            ClassifyReport rep = cls.classify(parse_primes(primes));
            for (const Verdict& v : rep.verdicts) std::cout << v.line() << "\n";
            std::cout << "summary candidates=" << rep.verdicts.size()
                      << " curious=" << rep.count(Status::Curious)
                      << " unknown=" << rep.count(Status::UnknownNeedsData) << "\n";
            return rep.count(Status::UnknownNeedsData) ? kVerifyFailed : kOk;
        } else if (check_cmd->parsed()) {
            bool ok = true;
            for (const LabelReport& r : check_labels(reg)) {
                std::cout << r.line() << "\n";
                ok = ok && r.pass;
            }
            return ok ? kOk : kVerifyFailed;
        } else if (iso_cmd->parsed()) {
            bool ok = true;
            for (const IsogenyCheck& c : verify_isogeny_facts(reg)) {
                std::cout << c.line() << "\n";
                ok = ok && c.pass;
            }
            return ok ? kOk : kVerifyFailed;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnknownPrime& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kVerifyFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFailed;
    }
    return kOk;
}
