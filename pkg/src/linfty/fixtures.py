"""Hand-built desk-scale fixtures used across the test suite and the CLI.

Each builder returns fresh objects so callers can mutate freely.  The
registry at the bottom maps fixture names to builders for scripts.

Naming scheme, kept stable because frozen test values refer to it:
  fix_a        flat two-generator line with one differential arrow
  fix_b        curved one-relation algebra whose generator is Maurer-Cartan
  fix_b2       the same shape transported through x -> x, c -> 2c
  fix_c        two-chart cover of constants with identity restrictions
  jacobi_violation  bracket table failing Jacobi first at arity three
  nonadapted   resolution that is exact untwisted but dies when twisted
  cech_fixb    two-chart spread of fix_b, identity restrictions
"""

from fractions import Fraction

from .graded import GradedSpace, ONE
from .structures import (
    LInftyStructure,
    identity_morphism,
    strict_morphism,
)
from .modules import (
    LInftyModule,
    ModuleMorphism,
    identity_module_morphism,
    module_from_morphism,
    module_morphism_from_triangle,
)
from .products import (
    CoverDescription,
    ProductStructure,
    build_cech_complex,
    product_morphism,
    slotwise_morphism,
    tuple_slot,
)
from .resolutions import ResolutionDiagram, ResolutionMorphism
from .structures import from_curved_lie


def fix_a():
    space = GradedSpace([("a", 0, 1), ("b", 1, 1)], 3, label="fix_a")
    return LInftyStructure(space, {1: {("a",): {"b": ONE}}}, label="fix_a")


def fix_b():
    return from_curved_lie(
        [("x", 1, 1), ("c", 2, 2)], 3,
        curvature={"c": ONE},
        differential={},
        bracket={("x", "x"): {"c": Fraction(2)}},
        label="fix_b")


def fix_b2():
    return from_curved_lie(
        [("x", 1, 1), ("c", 2, 2)], 3,
        curvature={"c": Fraction(2)},
        differential={},
        bracket={("x", "x"): {"c": Fraction(4)}},
        label="fix_b2")


def morphism_t():
    """Strict isomorphism fix_b -> fix_b2 doubling the curvature generator."""
    return strict_morphism(fix_b(), fix_b2(),
                           {"x": {"x": ONE}, "c": {"c": Fraction(2)}},
                           label="t")


def jacobi_violation():
    """Antisymmetric bracket whose Jacobiator is e3 at (e1, e2, e3)."""
    return from_curved_lie(
        [("e1", 0, 0), ("e2", 0, 0), ("e3", 0, 0)], 1,
        curvature={},
        differential={},
        bracket={("e1", "e2"): {"e2": ONE}, ("e2", "e3"): {"e3": ONE}},
        label="jacobi_violation")


def _constants_chart(label):
    space = GradedSpace([("f", -1, 0)], 1, label=label)
    return LInftyStructure(space, {}, label=label)


def fix_c_cover():
    charts = {
        ("U",): _constants_chart("U"),
        ("V",): _constants_chart("V"),
        ("U", "V"): _constants_chart("UV"),
    }
    restrictions = {
        (("U",), ("U", "V")): strict_morphism(
            charts[("U",)], charts[("U", "V")], {"f": {"f": ONE}}),
        (("V",), ("U", "V")): strict_morphism(
            charts[("V",)], charts[("U", "V")], {"f": {"f": ONE}}),
    }
    return CoverDescription(["U", "V"], list(charts), charts, restrictions,
                            label="fix_c")


def fix_c_diagram():
    cover = fix_c_cover()
    global_structure = _constants_chart("global")
    restrictions = {
        name: strict_morphism(global_structure, cover.local_structures[(name,)],
                              {"f": {"f": ONE}})
        for name in cover.opens
    }
    return build_cech_complex(cover, global_structure, restrictions,
                              label="fix_c")


def fix_c_identity_ladder():
    src = fix_c_diagram()
    tgt = fix_c_diagram()
    return ResolutionMorphism(
        src, tgt,
        identity_module_morphism(src.augmented),
        [identity_module_morphism(m) for m in src.levels],
        label="fix_c_identity")


def perturbed_ladder():
    """Identity ladder with the last level map doubled; square 1 breaks."""
    ladder = fix_c_identity_ladder()
    last = ladder.level_maps[-1]
    doubled = ModuleMorphism(
        last.source, last.target,
        {k: {key: {g: 2 * q for g, q in value.items()}
             for key, value in table.items()}
         for k, table in last.components.items()},
        label="doubled")
    return ResolutionMorphism(ladder.source, ladder.target,
                              ladder.augmented_map,
                              ladder.level_maps[:-1] + [doubled],
                              label="perturbed")


def _spread_cover(local_builder, label):
    charts = {
        ("U",): local_builder(),
        ("V",): local_builder(),
        ("U", "V"): local_builder(),
    }
    ident = {g: {g: ONE} for g in charts[("U",)].space.basis}
    restrictions = {
        (("U",), ("U", "V")): strict_morphism(
            charts[("U",)], charts[("U", "V")], ident),
        (("V",), ("U", "V")): strict_morphism(
            charts[("V",)], charts[("U", "V")], ident),
    }
    return CoverDescription(["U", "V"], list(charts), charts, restrictions,
                            label=label)


def cech_fixb_diagram():
    """fix_b spread over two charts with identity restrictions."""
    cover = _spread_cover(fix_b, "cech_fixb")
    base = fix_b()
    restrictions = {
        name: strict_morphism(base, cover.local_structures[(name,)],
                              {g: {g: ONE} for g in base.space.basis})
        for name in cover.opens
    }
    return build_cech_complex(cover, base, restrictions, label="cech_fixb")


def cech_fixb_ladder():
    """Ladder from the fix_b spread to the fix_b2 spread over the same base.

    Both diagrams are modules over fix_b; the target charts carry the
    transported structure and are reached through the doubling morphism, so
    the vertical maps come from the fiberwise triangle construction.
    """
    src = cech_fixb_diagram()
    base = src.base
    doubling = {"x": {"x": ONE}, "c": {"c": Fraction(2)}}
    cover = _spread_cover(fix_b2, "cech_fixb2")
    restrictions = {
        name: strict_morphism(base, cover.local_structures[(name,)], doubling)
        for name in cover.opens
    }
    tgt = build_cech_complex(cover, base, restrictions, label="cech_fixb2")

    src_cover = _spread_cover(fix_b, "cech_fixb")
    verticals = []
    for k in range(len(src.levels)):
        tuples = src_cover.level(k)
        src_product = ProductStructure(
            {tuple_slot(a): src_cover.local_structures[a] for a in tuples})
        tgt_product = ProductStructure(
            {tuple_slot(a): cover.local_structures[a] for a in tuples})
        fiber = slotwise_morphism(src_product, tgt_product, {
            tuple_slot(a): strict_morphism(
                src_cover.local_structures[a], cover.local_structures[a],
                doubling)
            for a in tuples})
        inner = product_morphism(src_product, {
            tuple_slot(a): strict_morphism(
                base, src_cover.local_structures[a],
                {g: {g: ONE} for g in base.space.basis})
            for a in tuples})
        verticals.append(module_morphism_from_triangle(fiber, inner))
    return ResolutionMorphism(
        src, tgt,
        identity_module_morphism(src.augmented),
        verticals,
        label="cech_fixb_ladder")


def nonadapted_diagram():
    """Exact at zero twist over fix_b, but the twisted connecting map dies.

    Both modules carry the zero operator (their filtration levels push every
    curvature term past the truncation), the augmented module is empty, and
    the connecting map has arity parts that cancel after twisting by x.
    """
    base = fix_b()
    empty = LInftyModule(base, GradedSpace([], 3, label="zero"), {},
                         label="zero")
    m0 = LInftyModule(base, GradedSpace([("u", 0, 1)], 3, label="m0"), {},
                      label="m0")
    m1 = LInftyModule(base, GradedSpace([("v", 0, 2)], 3, label="m1"), {},
                      label="m1")
    augmentation = ModuleMorphism(empty, m0, {}, label="aug")
    d0 = ModuleMorphism(m0, m1, {
        0: {((), "u"): {"v": ONE}},
        1: {(("x",), "u"): {"v": Fraction(-1)}},
    }, label="d0")
    return ResolutionDiagram(base, empty, [m0, m1], augmentation, [d0],
                             label="nonadapted")


REGISTRY = {
    "fix_a": fix_a,
    "fix_b": fix_b,
    "fix_b2": fix_b2,
    "jacobi_violation": jacobi_violation,
    "fix_c": fix_c_diagram,
    "cech_fixb": cech_fixb_diagram,
    "cech_fixb_ladder": cech_fixb_ladder,
    "perturbed_ladder": perturbed_ladder,
    "nonadapted": nonadapted_diagram,
}
