"""Graded substrate: exact scalars, graded bases, Koszul signs and symmetric words.

Conventions used by every other module:

* Scalars are exact rationals (fractions.Fraction).  No floats anywhere.
* All stored degrees are degrees in the shifted space L[1].  An element of
  unshifted degree d sits in shifted degree d - 1.  Constructors that accept
  unshifted data (curved Lie algebras, dg modules) do the shift themselves;
  nothing else ever converts.
* Every space declares a nilpotency order N as a stand-in for a complete
  filtration: filtration levels of generators lie in [0, N) and any product
  whose total filtration weight reaches N is treated as zero.  Words in the
  symmetric coalgebra are truncated by total weight when they are built as
  coalgebra elements; evaluation of a multilinear component on a heavy word
  needs no truncation because filtration compatibility already forces the
  value to vanish.
* The canonical form of a word sorts its factors by (degree, name) and
  absorbs the Koszul sign of the sort.  A word with a repeated odd factor is
  zero.  All maps are stored sparsely on canonical words, which makes graded
  symmetry automatic.
"""

from fractions import Fraction
import itertools


class LinftyError(Exception):
    """Base for all errors raised by this package."""


class InputError(LinftyError):
    """Malformed or inconsistent input data (CLI exit code 2)."""


class MathCheckError(LinftyError):
    """A mathematical validation failed (CLI exit code 1)."""


ZERO = Fraction(0)
ONE = Fraction(1)

# Characters reserved by the fixture format for word and tensor keys.
_FORBIDDEN_NAME_CHARS = set("|@ \t\n")


def parse_scalar(text):
    """Parse "p" or "p/q" into a Fraction.  Bare ints pass through."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise InputError(f"exact scalars required, got {type(text).__name__}")
    s = text.strip()
    try:
        if "/" in s:
            p, q = s.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad scalar literal {text!r}") from exc


def format_scalar(q):
    """Canonical form: "p" when the denominator is 1, else "p/q"."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def koszul_sign(perm, degrees):
    """Sign epsilon(sigma) for reordering graded factors.

    perm lists original positions (0-based) in output order, so the word
    g_0 v ... v g_{n-1} becomes g_{perm[0]} v ... v g_{perm[n-1]}.  degrees
    are the shifted degrees of g_0..g_{n-1} indexed by original position.
    Each inverted pair of odd factors contributes -1.
    """
    n = len(perm)
    if len(degrees) != n or sorted(perm) != list(range(n)):
        raise InputError(f"malformed permutation {perm!r}")
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j] and degrees[perm[i]] % 2 and degrees[perm[j]] % 2:
                sign = -sign
    return sign


def shuffles(k, l):
    """All (k,l)-shuffles of {0..k+l-1} in lexicographic order.

    A shuffle is returned as a tuple s with s[:k] and s[k:] both increasing;
    s lists original positions in output order, matching koszul_sign.
    Sh(n,0) = Sh(0,n) = {identity}.
    """
    if k < 0 or l < 0:
        raise InputError("shuffle block sizes must be nonnegative")
    n = k + l
    out = []
    for left in itertools.combinations(range(n), k):
        leftset = set(left)
        right = tuple(i for i in range(n) if i not in leftset)
        out.append(left + right)
    return out


def multi_shuffles(block_sizes):
    """All (k_1,...,k_p)-shuffles: permutations increasing on each block."""
    total = sum(block_sizes)
    results = [()]
    remaining = [tuple(range(total))]
    for size in block_sizes:
        new_results = []
        new_remaining = []
        for prefix, rest in zip(results, remaining):
            for pick in itertools.combinations(rest, size):
                pickset = set(pick)
                new_results.append(prefix + pick)
                new_remaining.append(tuple(i for i in rest if i not in pickset))
        results = new_results
        remaining = new_remaining
    return results


class GradedSpace:
    """Finite ordered basis with shifted degrees and filtration levels.

    The basis is sorted into canonical (degree, name) order on construction.
    nilpotency_order N declares the truncation: generator levels are < N and
    total filtration weight >= N counts as zero.
    """

    def __init__(self, generators, nilpotency_order, label=""):
        if nilpotency_order < 1:
            raise InputError("nilpotency order must be a positive integer")
        gens = []
        for name, degree, filt in generators:
            if not isinstance(name, str) or not name:
                raise InputError(f"generator name must be a nonempty string, got {name!r}")
            if _FORBIDDEN_NAME_CHARS & set(name):
                raise InputError(f"generator name {name!r} uses a reserved character")
            if not isinstance(degree, int) or isinstance(degree, bool):
                raise InputError(f"generator {name}: degree must be an integer")
            if not isinstance(filt, int) or filt < 0 or filt >= nilpotency_order:
                raise InputError(
                    f"generator {name}: filtration level must lie in [0, {nilpotency_order})")
            gens.append((name, degree, filt))
        gens.sort(key=lambda g: (g[1], g[0]))
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise InputError("generator names must be unique")
        self.label = label
        self.generators = tuple(gens)
        self.nilpotency_order = nilpotency_order
        self._degree = {g[0]: g[1] for g in gens}
        self._filtration = {g[0]: g[2] for g in gens}
        self._index = {g[0]: i for i, g in enumerate(gens)}

    @property
    def basis(self):
        return tuple(g[0] for g in self.generators)

    def __contains__(self, name):
        return name in self._degree

    def degree(self, name):
        try:
            return self._degree[name]
        except KeyError:
            raise InputError(f"unknown generator {name!r}") from None

    def filtration(self, name):
        try:
            return self._filtration[name]
        except KeyError:
            raise InputError(f"unknown generator {name!r}") from None

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown generator {name!r}") from None

    def is_odd(self, name):
        return self.degree(name) % 2 != 0

    def degrees_by_degree(self):
        """Map shifted degree -> tuple of generator names, in basis order."""
        out = {}
        for name, degree, _ in self.generators:
            out.setdefault(degree, []).append(name)
        return {d: tuple(v) for d, v in out.items()}

    # -- words ------------------------------------------------------------

    def normalize_word(self, factors):
        """Canonical (word, sign) for a list of generator names, or None if zero.

        The Koszul sign of sorting into (degree, name) order is returned
        separately; a repeated odd generator makes the word zero.
        """
        for f in factors:
            if f not in self._degree:
                raise InputError(f"unknown generator {f!r} in word")
        n = len(factors)
        sign = 1
        for i in range(n):
            di = self._degree[factors[i]]
            for j in range(i + 1, n):
                if self._index[factors[i]] > self._index[factors[j]]:
                    if di % 2 and self._degree[factors[j]] % 2:
                        sign = -sign
        word = tuple(sorted(factors, key=self._index.__getitem__))
        for a, b in zip(word, word[1:]):
            if a == b and self._degree[a] % 2:
                return None
        return word, sign

    def word_degree(self, word):
        return sum(self._degree[f] for f in word)

    def word_weight(self, word):
        return sum(self._filtration[f] for f in word)

    def enumerate_words(self, max_arity, min_arity=0):
        """All canonical nonzero words with arity in [min_arity, max_arity].

        Words whose total filtration weight reaches the nilpotency order are
        zero and are skipped.  Deterministic order: by arity, then
        lexicographically in basis indices.
        """
        names = self.basis
        for arity in range(min_arity, max_arity + 1):
            for combo in itertools.combinations_with_replacement(names, arity):
                if any(a == b and self._degree[a] % 2
                       for a, b in zip(combo, combo[1:])):
                    continue
                if self.word_weight(combo) >= self.nilpotency_order:
                    continue
                yield combo


# -- elements (plain dicts generator name -> Fraction) ---------------------

def el_canon(terms):
    return {g: q for g, q in terms.items() if q != 0}

def el_add(a, b):
    out = dict(a)
    for g, q in b.items():
        s = out.get(g, ZERO) + q
        if s:
            out[g] = s
        else:
            out.pop(g, None)
    return out

def el_sub(a, b):
    return el_add(a, el_scale(b, -1))

def el_scale(a, q):
    q = Fraction(q)
    if not q:
        return {}
    return {g: c * q for g, c in a.items()}

def element_degree(space, el):
    """Common shifted degree of a homogeneous element, None for zero."""
    degs = {space.degree(g) for g in el}
    if not degs:
        return None
    if len(degs) > 1:
        raise InputError(f"element is not homogeneous: degrees {sorted(degs)}")
    return degs.pop()

def filtration_weight(space, el):
    """Minimum filtration level over the support; N for the zero element."""
    if not el:
        return space.nilpotency_order
    return min(space.filtration(g) for g in el)


# -- coalgebra elements (dicts canonical word -> Fraction) ------------------

def co_canon(space, terms):
    """Drop zero coefficients and words of filtration weight >= N."""
    cap = space.nilpotency_order
    return {w: q for w, q in terms.items() if q and space.word_weight(w) < cap}

def co_add(a, b):
    out = dict(a)
    for w, q in b.items():
        s = out.get(w, ZERO) + q
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return out

def co_scale(a, q):
    q = Fraction(q)
    if not q:
        return {}
    return {w: c * q for w, c in a.items()}

def co_from_element(el):
    """View an element of L as a sum of arity-1 words."""
    return {(g,): q for g, q in el.items()}


def expand_factors(space, factors):
    """Multilinear expansion of a formal product of elements into words.

    factors is a list of elements (dicts).  Returns dict word -> Fraction
    with canonical words and Koszul signs folded in.  No weight truncation:
    this is the expansion used to feed arguments to multilinear components,
    where heavy words are annihilated by filtration compatibility instead.
    """
    out = {}
    for combo in itertools.product(*[list(el.items()) for el in factors]):
        names = [g for g, _ in combo]
        coeff = ONE
        for _, q in combo:
            coeff *= q
        norm = space.normalize_word(names)
        if norm is None:
            continue
        word, sign = norm
        s = out.get(word, ZERO) + coeff * sign
        if s:
            out[word] = s
        else:
            out.pop(word, None)
    return out


def sym_mul(space, a, b):
    """Symmetric product of two coalgebra elements, weight-truncated."""
    cap = space.nilpotency_order
    out = {}
    for wa, qa in a.items():
        weight_a = space.word_weight(wa)
        for wb, qb in b.items():
            if weight_a + space.word_weight(wb) >= cap:
                continue
            norm = space.normalize_word(list(wa) + list(wb))
            if norm is None:
                continue
            word, sign = norm
            s = out.get(word, ZERO) + qa * qb * sign
            if s:
                out[word] = s
            else:
                out.pop(word, None)
    return out


def sym_power(space, el, k):
    """k-th symmetric power of an element, as a coalgebra element."""
    acc = {(): ONE}
    word = co_from_element(el)
    for _ in range(k):
        acc = sym_mul(space, acc, word)
        if not acc:
            break
    return acc
