#include "lamekit/cli/models.hpp"

#include <memory>
#include <string>

#include "lamekit/errors.hpp"
#include "lamekit/lame.hpp"

namespace lamekit::cli {

namespace {

std::string describe(Interval d) { return "[" + std::to_string(d.lo) + ", " + std::to_string(d.hi) + "]"; }

PotentialModel numeric_model(ScalarField w) {
  PotentialModel m;
  m.w = w;
  m.pair_on = [w](Interval d) { return numeric_symmetry(w, 0.0, d); };
  m.family_on = [w](Interval d) { return numeric_symmetry_family(w, d); };
  return m;
}

PotentialModel lame_model(const LamePotentialSpec& pot, std::optional<LameSymmetrySpec> sym) {
  auto eval = std::make_shared<const WeierstrassEvaluator>(pot.invariants);
  PotentialModel m = numeric_model(lame_potential_field(pot, *eval));
  if (sym) {
    m.pair_on = [pot, sym = *sym, eval](Interval d) { return assemble_fields(pot, sym, *eval, d); };
    m.analytic_symmetry = true;
  }
  return m;
}

PotentialModel build(const PotentialSpec& spec) {
  return std::visit(
      [&](const auto& b) -> PotentialModel {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConstantKind>) {
          PotentialModel m;
          m.w = ScalarField::constant(b.value);
          m.pair_on = [v = b.value](Interval d) { return constant_family(v, d)(0.0); };
          m.family_on = [v = b.value](Interval d) { return constant_family(v, d); };
          m.analytic_symmetry = true;
          return m;
        } else if constexpr (std::is_same_v<T, LameEvenKind>) {
          const EllipticInvariants inv{b.g2, b.g3};
          const EvenFamily fam = even_coefficients(b.n, b.c0, inv);
          PotentialModel m = lame_model(fam.potential(), fam.symmetry());
          m.family_on = [n = b.n, c0 = b.c0, inv](Interval d) { return lame_even_family(n, c0, inv, d); };
          return m;
        } else if constexpr (std::is_same_v<T, LameOddKind>) {
          const OddFamily fam = odd_coefficients(b.n, b.c0, {b.g2, b.g3});
          return lame_model(fam.potential(), fam.symmetry());
        } else if constexpr (std::is_same_v<T, LameGeneralKind>) {
          const LamePotentialSpec pot{Polynomial(b.C), Polynomial(b.E), {b.g2, b.g3}};
          std::optional<LameSymmetrySpec> sym;
          if (b.A || b.B) {
            sym = LameSymmetrySpec{Polynomial(b.A.value_or(std::vector<double>{})),
                                   Polynomial(b.B.value_or(std::vector<double>{}))};
          }
          return lame_model(pot, sym);
        } else if constexpr (std::is_same_v<T, MexicanHatKind>) {
          return numeric_model(mexican_hat_field({b.nu, b.delta}));
        } else if constexpr (std::is_same_v<T, OddTrivialKind>) {
          const OddTrivialPair trivial = odd_trivial_pair(b.n, b.w0);
          PotentialModel m = numeric_model(trivial.w);
          m.pair_on = [trivial](Interval d) { return trivial.on(d); };
          m.analytic_symmetry = true;
          return m;
        } else {
          const Interval dom = *spec.domain;
          const PotentialModel base = build_model(*b.base);
          const SymmetryPair base_pair = base.pair_on(dom);
          const Grid grid(dom.lo, dom.hi, static_cast<std::size_t>(b.samples));
          const SymmetryPair stepped = hierarchy_step(base_pair, b.c_hat, b.alpha, b.base_point, grid);
          PotentialModel m = numeric_model(stepped.w());
          m.pair_on = [stepped, dom](Interval d) {
            if (d.lo < dom.lo || d.hi > dom.hi) {
              throw ZeroSymmetry("hierarchy pair is only defined on " + describe(dom) + ", requested " + describe(d));
            }
            if (d.lo == dom.lo && d.hi == dom.hi) return stepped;
            return SymmetryPair::build(stepped.w(), stepped.z(), d);
          };
          m.analytic_symmetry = true;
          return m;
        }
      },
      spec.body);
}

}  // namespace

PotentialModel build_model(const PotentialSpec& spec) {
  PotentialModel m = build(spec);
  m.domain_hint = spec.domain;
  return m;
}

}  // namespace lamekit::cli
