"""Curved structures on the reduced-plus-unit symmetric coalgebra.

A structure is stored by its Taylor components: for each arity k a sparse
table of values on canonical words.  The coderivation it generates acts on a
word by splitting off every shuffle-selected subword:

    Q(g_1 v ... v g_n) = sum over k, sigma in Sh(k, n-k) of
        eps(sigma) Q_k(left block) v (right block)

with Sh(n,0) = Sh(0,n) = {id} and Q_0 applied to the unit word.  A morphism
acts by cutting the word into ordered blocks of positive sizes along
multi-shuffles, applying one component per block and dividing by p! for p
blocks.  Both actions land in the weight-truncated coalgebra.

Construction validates shape only: degree +1 (shifted) and filtration
compatibility for structures, degree 0 for morphisms, matching truncation
orders.  Whether Q squares to zero or F intertwines coderivations is checked
separately, so ill-formed examples can be built and probed.

Components at arities beyond a materialization cap are not representable;
derived objects (composites, inverses, conjugates) are materialized up to an
explicit cap that callers must choose at least as large as any arity they
later inspect.  The default cap covers the verification arity and every word
that survives truncation when all generators sit in positive filtration.
"""

from fractions import Fraction
from math import factorial

from .graded import (
    InputError,
    MathCheckError,
    ONE,
    ZERO,
    co_add,
    co_canon,
    el_add,
    el_scale,
    expand_factors,
    filtration_weight,
    koszul_sign,
    multi_shuffles,
    shuffles,
)
from .homology import ChainComplex, Matrix, check_chain_map, induced_map, is_isomorphism, solve

VERIFY_ARITY = 4


def default_cap(space, floor=VERIFY_ARITY):
    """Materialization cap: verification arity, or N-1 when that is larger."""
    return max(floor, space.nilpotency_order - 1)


def _canonicalize_components(space, components, expected_degree, value_space=None):
    """Normalize word keys, fold signs, validate degrees and filtration.

    expected_degree is the shifted degree shift of the map (structure: +1,
    morphism: 0).  Values live in value_space (defaults to space).
    """
    vspace = value_space or space
    out = {}
    for arity, table in components.items():
        arity = int(arity)
        if arity < 0:
            raise InputError("component arities must be nonnegative")
        canon = {}
        for word, element in table.items():
            word = tuple(word)
            if len(word) != arity:
                raise InputError(f"word {word} filed under arity {arity}")
            norm = space.normalize_word(list(word))
            element = {g: Fraction(q) for g, q in element.items() if q}
            if norm is None:
                if element:
                    raise InputError(f"nonzero value on the zero word {word}")
                continue
            cword, sign = norm
            value = el_scale(element, sign)
            if not value:
                continue
            prev = canon.get(cword)
            canon[cword] = el_add(prev, value) if prev else value
        for cword, value in list(canon.items()):
            value = {g: q for g, q in value.items() if q}
            if not value:
                del canon[cword]
                continue
            word_deg = space.word_degree(cword)
            for g in value:
                if vspace.degree(g) != word_deg + expected_degree:
                    raise InputError(
                        f"value of arity-{arity} component on {cword} has degree "
                        f"{vspace.degree(g)} at {g}, expected {word_deg + expected_degree}")
            if filtration_weight(vspace, value) < space.word_weight(cword):
                raise InputError(
                    f"component on {cword} lowers filtration weight")
            if space.word_weight(cword) >= space.nilpotency_order:
                raise InputError(
                    f"nonzero component on {cword}, a word of vanishing weight")
            canon[cword] = value
        if canon:
            out[arity] = canon
    return out


class LInftyStructure:
    """Taylor components of a degree +1 coderivation on one graded space."""

    def __init__(self, space, components, label=""):
        self.space = space
        self.label = label
        self.components = _canonicalize_components(space, components, 1)
        self.max_arity = max(self.components, default=0)

    def component(self, arity, word):
        """Value on a canonical word; empty dict when absent."""
        return self.components.get(arity, {}).get(tuple(word), {})

    def value(self, factors):
        """Value on any word of generator names, Koszul sign folded in."""
        norm = self.space.normalize_word(list(factors))
        if norm is None:
            return {}
        word, sign = norm
        return el_scale(self.component(len(word), word), sign)

    def curvature(self):
        """Q_0 applied to the unit word."""
        return self.component(0, ())

    def is_flat(self):
        return not self.curvature()

    def __eq__(self, other):
        return (isinstance(other, LInftyStructure)
                and spaces_equal(self.space, other.space)
                and self.components == other.components)

    def __hash__(self):
        return NotImplemented


def spaces_equal(a, b):
    return (a.generators == b.generators
            and a.nilpotency_order == b.nilpotency_order)


def coderivation_apply(structure, coelt):
    """Apply the full coderivation to a coalgebra element."""
    space = structure.space
    out = {}
    for word, coeff in coelt.items():
        if not coeff:
            continue
        n = len(word)
        degrees = [space.degree(g) for g in word]
        for k in range(0, n + 1):
            if k > structure.max_arity:
                break
            if k not in structure.components and k > 0:
                continue
            for sigma in shuffles(k, n - k):
                eps = koszul_sign(sigma, degrees)
                left = [word[sigma[i]] for i in range(k)]
                right = [word[sigma[i]] for i in range(k, n)]
                value = structure.value(left)
                if not value:
                    continue
                for produced, q in value.items():
                    norm = space.normalize_word([produced] + right)
                    if norm is None:
                        continue
                    oword, osign = norm
                    term = coeff * eps * q * osign
                    s = out.get(oword, ZERO) + term
                    if s:
                        out[oword] = s
                    else:
                        out.pop(oword, None)
    return co_canon(space, out)


def check_square_zero(structure, max_arity=VERIFY_ARITY):
    """Q o Q = 0 on every surviving word up to max_arity; witness on failure."""
    for word in structure.space.enumerate_words(max_arity):
        once = coderivation_apply(structure, {word: ONE})
        twice = coderivation_apply(structure, once)
        if twice:
            raise MathCheckError(
                f"coderivation does not square to zero: residual {twice} on word {word}")
    return True


def from_curved_lie(generators, nilpotency_order, curvature, differential,
                    bracket, label=""):
    """Structure of a curved Lie algebra given in unshifted degrees.

    generators: (name, unshifted degree, filtration level) triples.
    curvature: element of unshifted degree 2.  differential: generator ->
    element, unshifted degree +1.  bracket: (g, h) -> element; pairs absent
    in both orders are zero, pairs given in both orders must agree with
    antisymmetry [g,h] = -(-1)^{|g||h|}[h,g] in unshifted degrees.

    Components on the shifted space: Q_0(1) = -R, Q_1 = -d, and on a word
    g v h the quadratic part is -(-1)^{|g|}[g,h] with |g| unshifted.
    """
    from .graded import GradedSpace

    shifted = [(name, deg - 1, filt) for name, deg, filt in generators]
    space = GradedSpace(shifted, nilpotency_order, label=label)
    unshifted_degree = {name: deg for name, deg, _ in generators}

    def checked_element(el, expected_deg, what):
        el = {g: Fraction(q) for g, q in el.items() if q}
        for g in el:
            if g not in unshifted_degree:
                raise InputError(f"{what} mentions unknown generator {g!r}")
            if unshifted_degree[g] != expected_deg:
                raise InputError(
                    f"{what}: generator {g} has unshifted degree "
                    f"{unshifted_degree[g]}, expected {expected_deg}")
        return el

    comp0 = {}
    curvature = checked_element(curvature, 2, "curvature")
    if curvature:
        comp0[()] = el_scale(curvature, -1)

    comp1 = {}
    for g, image in differential.items():
        if g not in unshifted_degree:
            raise InputError(f"differential defined on unknown generator {g!r}")
        image = checked_element(image, unshifted_degree[g] + 1, f"d({g})")
        if image:
            comp1[(g,)] = el_scale(image, -1)

    # collect the bracket on unordered pairs, enforcing antisymmetry
    table = {}
    for (g, h), value in bracket.items():
        if g not in unshifted_degree or h not in unshifted_degree:
            raise InputError(f"bracket on unknown pair ({g!r}, {h!r})")
        value = checked_element(
            value, unshifted_degree[g] + unshifted_degree[h], f"[{g},{h}]")
        key = (g, h)
        flip_sign = -(-1) ** (unshifted_degree[g] * unshifted_degree[h])
        if key in table and table[key] != value:
            raise InputError(f"bracket given twice on ({g}, {h}) with different values")
        table[key] = value
        flipped = el_scale(value, flip_sign)
        rkey = (h, g)
        if rkey in bracket:
            other = {x: Fraction(q) for x, q in bracket[rkey].items() if q}
            if other != flipped:
                raise InputError(f"bracket on ({g},{h}) and ({h},{g}) breaks antisymmetry")
        table.setdefault(rkey, flipped)

    comp2 = {}
    for word in space.enumerate_words(2, min_arity=2):
        g, h = word
        value = table.get((g, h), {})
        if not value:
            continue
        signed = el_scale(value, -(-1) ** unshifted_degree[g])
        if signed:
            comp2[word] = signed
    # a repeated generator word (g, g) needs [g, g]; consistency with the
    # flip rule is automatic only for distinct pairs, so check separately
    for (g, h), value in table.items():
        if g == h and value:
            if unshifted_degree[g] % 2 == 0:
                raise InputError(f"[{g},{g}] must vanish for even {g}")

    return LInftyStructure(space, {0: comp0, 1: comp1, 2: comp2}, label=label)


class LInftyMorphism:
    """Taylor components of a coalgebra morphism between two structures."""

    def __init__(self, source, target, components, label=""):
        if source.space.nilpotency_order != target.space.nilpotency_order:
            raise InputError("morphism endpoints must share one truncation order")
        self.source = source
        self.target = target
        self.label = label
        comps = _canonicalize_components(
            source.space, components, 0, value_space=target.space)
        if 0 in comps:
            raise InputError("morphism components start at arity 1")
        self.components = comps
        self.max_arity = max(self.components, default=0)

    def component(self, arity, word):
        return self.components.get(arity, {}).get(tuple(word), {})

    def value(self, factors):
        norm = self.source.space.normalize_word(list(factors))
        if norm is None:
            return {}
        word, sign = norm
        return el_scale(self.component(len(word), word), sign)

    def is_strict(self):
        return self.max_arity <= 1

    def __eq__(self, other):
        return (isinstance(other, LInftyMorphism)
                and spaces_equal(self.source.space, other.source.space)
                and spaces_equal(self.target.space, other.target.space)
                and self.components == other.components)

    def __hash__(self):
        return NotImplemented


def _compositions(n, parts):
    """Ordered compositions of n into exactly `parts` positive integers."""
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def morphism_apply(morphism, coelt):
    """Apply the induced coalgebra morphism to a coalgebra element."""
    src = morphism.source.space
    tgt = morphism.target.space
    out = {}
    for word, coeff in coelt.items():
        if not coeff:
            continue
        n = len(word)
        if n == 0:
            s = out.get((), ZERO) + coeff
            if s:
                out[()] = s
            else:
                out.pop((), None)
            continue
        degrees = [src.degree(g) for g in word]
        for p in range(1, n + 1):
            inv_p = Fraction(1, factorial(p))
            for sizes in _compositions(n, p):
                if any(s > morphism.max_arity for s in sizes):
                    continue
                for sigma in multi_shuffles(sizes):
                    eps = koszul_sign(sigma, degrees)
                    blocks = []
                    pos = 0
                    dead = False
                    for size in sizes:
                        factors = [word[sigma[pos + i]] for i in range(size)]
                        pos += size
                        value = morphism.value(factors)
                        if not value:
                            dead = True
                            break
                        blocks.append(value)
                    if dead:
                        continue
                    expanded = expand_factors(tgt, blocks)
                    scale = coeff * eps * inv_p
                    for oword, q in expanded.items():
                        s = out.get(oword, ZERO) + q * scale
                        if s:
                            out[oword] = s
                        else:
                            out.pop(oword, None)
    return co_canon(tgt, out)


def check_morphism(morphism, max_arity=VERIFY_ARITY):
    """F Q = Q F on every surviving word up to max_arity; witness on failure."""
    for word in morphism.source.space.enumerate_words(max_arity):
        lhs = morphism_apply(morphism, coderivation_apply(morphism.source, {word: ONE}))
        rhs = coderivation_apply(morphism.target, morphism_apply(morphism, {word: ONE}))
        if lhs != rhs:
            diff = co_add(lhs, co_scale_neg(rhs))
            raise MathCheckError(
                f"morphism does not intertwine coderivations: residual {diff} on word {word}")
    return True


def co_scale_neg(coelt):
    return {w: -q for w, q in coelt.items()}


def strict_morphism(source, target, mapping, label=""):
    """Morphism with only an arity-1 component, given generator by generator."""
    comp1 = {(g,): dict(image) for g, image in mapping.items() if image}
    return LInftyMorphism(source, target, {1: comp1}, label=label)


def identity_morphism(structure):
    return strict_morphism(structure, structure,
                           {g: {g: ONE} for g in structure.space.basis})


def compose(outer, inner, max_arity=None):
    """Composite morphism outer o inner, materialized up to max_arity.

    Endpoint spaces must agree; whether the middle structures agree is the
    caller's business (identity tests compare derived structures on purpose).
    Components beyond the cap are dropped, so pick the cap at least as large
    as any arity later inspected; the default covers verification arity and,
    for positively filtered spaces, every surviving word.
    """
    if not spaces_equal(inner.target.space, outer.source.space):
        raise InputError("composition endpoints do not match")
    cap = max_arity or max(default_cap(inner.source.space),
                           inner.max_arity, outer.max_arity)
    comps = {}
    for word in inner.source.space.enumerate_words(cap, min_arity=1):
        image = morphism_apply(outer, morphism_apply(inner, {word: ONE}))
        value = {w[0]: q for w, q in image.items() if len(w) == 1}
        if value:
            comps.setdefault(len(word), {})[word] = value
    return LInftyMorphism(inner.source, outer.target, comps)


def _strict_blocks(morphism):
    """Per-degree matrices of the arity-1 component, plus basis bookkeeping."""
    src = morphism.source.space
    tgt = morphism.target.space
    src_by_deg = src.degrees_by_degree()
    tgt_by_deg = tgt.degrees_by_degree()
    blocks = {}
    for deg in set(src_by_deg) | set(tgt_by_deg):
        s_names = src_by_deg.get(deg, ())
        t_names = tgt_by_deg.get(deg, ())
        rows = []
        for t in t_names:
            row = []
            for s in s_names:
                row.append(morphism.component(1, (s,)).get(t, ZERO))
            rows.append(row)
        blocks[deg] = (Matrix(len(t_names), len(s_names), rows), s_names, t_names)
    return blocks


def invert(morphism, max_arity=None):
    """Inverse of a morphism whose arity-1 part is bijective.

    Strategy: E := inverse of the strict part, K := E o F (tangent to the
    identity).  K differs from the identity by a strictly arity-lowering map,
    so its inverse is the finite Neumann series; components are read off by
    projecting to arity one.  Returns K^{-1} o E.
    """
    src = morphism.source
    tgt = morphism.target
    inverse_map = {}
    for deg, (block, s_names, t_names) in _strict_blocks(morphism).items():
        if len(s_names) != len(t_names) or not is_isomorphism(block):
            raise MathCheckError(
                f"strict part is not invertible in degree {deg}")
        for j, t in enumerate(t_names):
            unit = [ONE if i == j else ZERO for i in range(len(t_names))]
            coords = solve(block, unit)
            inverse_map[t] = {s: coords[i] for i, s in enumerate(s_names) if coords[i]}
    strict_inverse = strict_morphism(tgt, src, inverse_map)

    cap = max_arity or max(default_cap(src.space), morphism.max_arity)
    tangent = compose(strict_inverse, morphism, max_arity=cap)

    comps = {}
    for word in src.space.enumerate_words(cap, min_arity=1):
        # Neumann series for (id + nu)^{-1} applied to the word
        total = {}
        term = {word: ONE}
        sign = 1
        while term:
            total = co_add(total, term if sign > 0 else co_scale_neg(term))
            image = morphism_apply(tangent, term)
            term = co_add(image, co_scale_neg(term))
            sign = -sign
        value = {w[0]: q for w, q in total.items() if len(w) == 1}
        if value:
            comps.setdefault(len(word), {})[word] = value
    tangent_inverse = LInftyMorphism(src, src, comps)
    return compose(tangent_inverse, strict_inverse, max_arity=cap)


def conjugate(structure, components, target_space=None, max_arity=None):
    """Transport a structure along a coalgebra isomorphism: Phi Q Phi^{-1}.

    components describe any coalgebra isomorphism out of the structure's
    space (raw morphism tables; the target structure cannot be wired in
    advance because conjugation is what computes it).  Returns the unique
    structure making the map an isomorphism of structures, together with
    that map, properly wired and ready for check_morphism.
    """
    tspace = target_space or structure.space
    placeholder = LInftyStructure(tspace, {})
    phi = LInftyMorphism(structure, placeholder, components)
    cap = max_arity or max(default_cap(structure.space), phi.max_arity)
    inverse = invert(phi, max_arity=cap)
    comps = {}
    for word in tspace.enumerate_words(cap):
        pulled = morphism_apply(inverse, {word: ONE})
        derived = coderivation_apply(structure, pulled)
        pushed = morphism_apply(phi, derived)
        value = {w[0]: q for w, q in pushed.items() if len(w) == 1}
        if value:
            comps.setdefault(len(word), {})[word] = value
    transported = LInftyStructure(tspace, comps)
    return transported, LInftyMorphism(structure, transported, components)


def chain_complex(structure):
    """Underlying complex (shifted degrees) of a flat structure."""
    if not structure.is_flat():
        raise MathCheckError(
            "curved structure has no underlying complex: curvature is nonzero")
    space = structure.space
    by_deg = space.degrees_by_degree()
    dims = {deg: len(names) for deg, names in by_deg.items()}
    diffs = {}
    for deg, names in by_deg.items():
        t_names = by_deg.get(deg + 1, ())
        rows = []
        for t in t_names:
            rows.append([structure.component(1, (s,)).get(t, ZERO) for s in names])
        m = Matrix(len(t_names), len(names), rows)
        if not m.is_zero():
            diffs[deg] = m
    return ChainComplex(dims, diffs,
                        labels={d: tuple(n) for d, n in by_deg.items()})


def is_quasi_iso(morphism):
    """Strict-part map on cohomology is an isomorphism in every degree.

    Both endpoint structures must be flat.  The arity-1 component is checked
    to be a chain map as part of the computation.
    """
    src_cx = chain_complex(morphism.source)
    tgt_cx = chain_complex(morphism.target)
    blocks = {deg: block for deg, (block, _, _) in _strict_blocks(morphism).items()}
    check_chain_map(src_cx, tgt_cx, blocks)
    for deg in sorted(set(src_cx.degrees()) | set(tgt_cx.degrees())):
        if not is_isomorphism(induced_map(src_cx, tgt_cx, blocks, deg)):
            return False
    return True
