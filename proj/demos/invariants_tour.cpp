/// Tour of the symmetric-pair invariants: walks the shipped diagram catalog,
/// tabulates the structural constants, then unpacks one quasi-split example
/// down to its skew matrix, kernel witness, and central leading term.

#include <cstdio>
#include <string>

#include "qsp/cli.hpp"
#include "qsp/gradedqsp.hpp"
#include "qsp/satake.hpp"

using namespace qsp;

namespace {

std::string vec_str(const IVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + ")";
}

}  // namespace

int main() {
    std::vector<CatalogEntry> catalog = load_catalog("");

    std::printf("%-16s %4s %4s %4s %6s %6s %4s %10s\n", "diagram", "rank", "N", "M", "dim k", "rank k",
                "N0", "degree l=3");
    for (const auto& entry : catalog) {
        SatakeInvariants inv = satake_invariants(entry.diagram);
        GradedPresentation p = graded_presentation(entry.diagram);
        std::printf("%-16s %4d %4d %4d %6ld %6d %4ld %10s\n", entry.name.c_str(), inv.n, inv.N, inv.M,
                    inv.dim_k, inv.rank_k, inv.n0, graded_degree(p, 3).str().c_str());
    }

    const SatakeDiagram& qs = detail::catalog_diagram(catalog, "qs_a2");
    GradedPresentation p = graded_presentation(qs);
    std::printf("\nquasi-split A2: adapted word");
    for (int letter : p.word.full) std::printf(" %d", letter + 1);
    std::printf(", %d skew generators\n", p.size());

    std::printf("skew matrix S:\n");
    for (int i = 0; i < p.S.rows; ++i) {
        std::printf(" ");
        for (int k = 0; k < p.S.cols; ++k) std::printf(" %3s", p.S.at(i, k).str().c_str());
        std::printf("\n");
    }

    KernelCertificate cert = verify_kernel_lemma(p, 3);
    std::printf("kernel certificate at l=3: %s, kernel order %s, image order %s\n",
                cert.pass ? "pass" : "fail", cert.kernel_cardinality.str().c_str(),
                cert.image_cardinality.str().c_str());
    for (const auto& w : cert.witnesses) std::printf("  witness exponent %s\n", vec_str(w).c_str());

    IVec nu = p_imath_basis(qs)[0];
    LeadingTerm lt = kl_leading_term(p, nu);
    std::printf("distinguished central element at nu = %s:\n", vec_str(nu).c_str());
    std::printf("  scalar %s, K-weight %s, exponent %s\n", lt.scalar.c_str(), vec_str(lt.k_weight).c_str(),
                vec_str(lt.exponent).c_str());
    return 0;
}
