"""Exact linear algebra over the rationals and cohomology of finite complexes.

Two independent elimination routines are kept on purpose: ranks come from
fraction-free Bareiss elimination on integer-scaled rows, while reduced row
echelon form over Fraction supplies deterministic kernel bases, solutions and
cohomology representatives.  cohomology() audits the two against each other
through rank-nullity, so a bug in either one surfaces as a hard error rather
than a silent wrong Betti number.

Complexes are cochain complexes: d(k) maps degree k to degree k + 1.
Zero-dimensional degrees are fully supported (shape-checked empty matrices);
resolution diagrams rely on that for their virtual zero ends.
"""

from fractions import Fraction
from math import gcd

from .graded import InputError, MathCheckError, ZERO, ONE


class Matrix:
    """Immutable exact matrix with explicit shape (0-row/0-col safe)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        if nrows < 0 or ncols < 0:
            raise InputError("matrix shape must be nonnegative")
        if rows is None:
            rows = [[ZERO] * ncols for _ in range(nrows)]
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise InputError(f"matrix rows do not match shape {nrows}x{ncols}")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(tuple(Fraction(x) for x in r) for r in rows)

    @classmethod
    def from_rows(cls, rows, ncols=None):
        rows = list(rows)
        if not rows:
            if ncols is None:
                raise InputError("empty matrix needs an explicit column count")
            return cls(0, ncols)
        width = len(rows[0])
        if ncols is not None and ncols != width:
            raise InputError("declared column count disagrees with rows")
        return cls(len(rows), width, rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[ONE if i == j else ZERO for j in range(n)]
                          for i in range(n)])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {[list(r) for r in self.rows]})"

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise InputError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        rows = [[sum((self.rows[i][k] * other.rows[k][j]
                      for k in range(self.ncols)), ZERO)
                 for j in range(other.ncols)] for i in range(self.nrows)]
        return Matrix(self.nrows, other.ncols, rows)

    def __add__(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise InputError("matrix shape mismatch in addition")
        return Matrix(self.nrows, self.ncols,
                      [[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        q = Fraction(q)
        return Matrix(self.nrows, self.ncols,
                      [[q * x for x in r] for r in self.rows])

    def transpose(self):
        return Matrix(self.ncols, self.nrows,
                      [[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)])

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise InputError("vector length does not match matrix columns")
        return tuple(sum((row[j] * vec[j] for j in range(self.ncols)), ZERO)
                     for row in self.rows)

    def column(self, j):
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)


def rank(m):
    """Rank by fraction-free Bareiss elimination on integer-scaled rows."""
    rows = []
    for r in m.rows:
        scale = 1
        for q in r:
            scale = scale * q.denominator // gcd(scale, q.denominator)
        rows.append([int(q * scale) for q in r])
    prev = 1
    rk = 0
    row = 0
    for col in range(m.ncols):
        if row >= len(rows):
            break
        piv = next((i for i in range(row, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        p = rows[row][col]
        for i in range(row + 1, len(rows)):
            head = rows[i][col]
            for j in range(col + 1, m.ncols):
                rows[i][j] = (rows[i][j] * p - head * rows[row][j]) // prev
            rows[i][col] = 0
        prev = p
        row += 1
        rk += 1
    return rk


def rref(m):
    """Reduced row echelon form.  Returns (Matrix, pivot column tuple)."""
    rows = [list(r) for r in m.rows]
    pivots = []
    row = 0
    for col in range(m.ncols):
        if row >= len(rows):
            break
        piv = next((i for i in range(row, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = ONE / rows[row][col]
        rows[row] = [x * inv for x in rows[row]]
        for i in range(len(rows)):
            if i != row and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[row])]
        pivots.append(col)
        row += 1
    return Matrix(m.nrows, m.ncols, rows), tuple(pivots)


def row_space(m):
    """Nonzero RREF rows: a deterministic basis of the row space."""
    red, pivots = rref(m)
    return [red.rows[i] for i in range(len(pivots))]


def nullspace(m):
    """Deterministic kernel basis: one vector per free column of the RREF."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * m.ncols
        v[free] = ONE
        for r, p in enumerate(pivots):
            v[p] = -red.rows[r][free]
        basis.append(tuple(v))
    return basis


def solve(m, b):
    """One exact solution of m x = b, or None when inconsistent."""
    if len(b) != m.nrows:
        raise InputError("right-hand side length does not match matrix rows")
    aug = Matrix(m.nrows, m.ncols + 1,
                 [list(r) + [bi] for r, bi in zip(m.rows, b)])
    red, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    x = [ZERO] * m.ncols
    for r, p in enumerate(pivots):
        x[p] = red.rows[r][m.ncols]
    return tuple(x)


def solve_matrix(a, b):
    """X with a * X = b, columnwise; None when any column is inconsistent."""
    if a.nrows != b.nrows:
        raise InputError("row counts disagree in matrix solve")
    cols = []
    for j in range(b.ncols):
        x = solve(a, b.column(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix(a.ncols, b.ncols,
                  [[cols[j][i] for j in range(b.ncols)] for i in range(a.ncols)])


def reduce_against(vec, basis_rows, pivots):
    """Subtract row-space multiples so vec vanishes on all pivot columns."""
    v = list(vec)
    for r, p in enumerate(pivots):
        if v[p] != 0:
            c = v[p]
            v = [a - c * b for a, b in zip(v, basis_rows[r])]
    return tuple(v)


class ChainComplex:
    """Finite cochain complex of rational spaces with exact cohomology.

    dims maps degree -> dimension; differentials maps degree k to the matrix
    of d: C^k -> C^{k+1} (shape dims[k+1] x dims[k]).  Missing entries are
    zero.  labels, when given, name the basis of each degree for reports.
    """

    def __init__(self, dims, differentials, labels=None, check=True):
        self.dims = {}
        for k, v in dims.items():
            if int(v) < 0:
                raise InputError("dimensions must be nonnegative")
            self.dims[int(k)] = int(v)
        self.labels = {int(k): tuple(v) for k, v in (labels or {}).items()}
        for k, names in self.labels.items():
            if len(names) != self.dim(k):
                raise InputError(f"degree {k}: {len(names)} labels for dimension {self.dim(k)}")
        self.differentials = {}
        for k, m in differentials.items():
            k = int(k)
            if not isinstance(m, Matrix):
                m = Matrix.from_rows(m, ncols=self.dim(k))
            if m.nrows != self.dim(k + 1) or m.ncols != self.dim(k):
                raise InputError(
                    f"differential at degree {k} has shape {m.nrows}x{m.ncols}, "
                    f"expected {self.dim(k + 1)}x{self.dim(k)}")
            if not m.is_zero():
                self.differentials[k] = m
        if check:
            self.check_complex()

    def dim(self, k):
        return self.dims.get(k, 0)

    def degrees(self):
        support = set(self.dims)
        for k in self.differentials:
            support.update((k, k + 1))
        return sorted(support)

    def d(self, k):
        if k in self.differentials:
            return self.differentials[k]
        return Matrix(self.dim(k + 1), self.dim(k))

    def check_complex(self):
        for k in list(self.differentials):
            comp = self.d(k + 1) * self.d(k)
            if not comp.is_zero():
                raise MathCheckError(f"d o d is nonzero from degree {k}")

    def cycle_basis(self, k):
        return nullspace(self.d(k))

    def _boundary_rref(self, k):
        image_rows = Matrix.from_rows(
            [self.d(k - 1).column(j) for j in range(self.dim(k - 1))],
            ncols=self.dim(k))
        return rref(image_rows)

    def cohomology(self, k):
        """(Betti number, deterministic representative vectors) at degree k.

        Representatives are cycle vectors reduced against the RREF of the
        boundary space and re-reduced among themselves; they are unique for a
        given basis ordering.  Rank-nullity audit: representative count must
        equal dim ker - rank(previous d).
        """
        cycles = self.cycle_basis(k)
        bred, bpivots = self._boundary_rref(k)
        reduced = [reduce_against(v, bred.rows, bpivots) for v in cycles]
        if reduced:
            rep_matrix, rep_pivots = rref(Matrix.from_rows(reduced, ncols=self.dim(k)))
            reps = [rep_matrix.rows[i] for i in range(len(rep_pivots))]
        else:
            reps = []
        boundary_rank = rank(self.d(k - 1))
        betti = len(cycles) - boundary_rank
        if len(reps) != betti:
            raise MathCheckError(
                f"cohomology audit failed at degree {k}: "
                f"{len(reps)} representatives vs Betti {betti}")
        return betti, reps

    def betti(self):
        return {k: self.cohomology(k)[0] for k in self.degrees()}

    def is_exact_at(self, k):
        return self.cohomology(k)[0] == 0

    def is_exact(self):
        """Exact at every degree, including the virtual zero ends."""
        return all(self.is_exact_at(k) for k in self.degrees())

    def total_dim(self):
        return sum(self.dims.values())


def check_chain_map(src, dst, maps):
    """Verify f d = d f degreewise; maps: degree -> Matrix (missing = zero)."""
    degrees = set(src.degrees()) | set(dst.degrees()) | set(maps)
    mats = {}
    for k in sorted(degrees):
        m = maps.get(k)
        if m is None:
            m = Matrix(dst.dim(k), src.dim(k))
        elif not isinstance(m, Matrix):
            m = Matrix.from_rows(m, ncols=src.dim(k))
        if m.nrows != dst.dim(k) or m.ncols != src.dim(k):
            raise InputError(f"chain map at degree {k} has wrong shape")
        mats[k] = m
    for k in sorted(degrees):
        f_next = mats.get(k + 1, Matrix(dst.dim(k + 1), src.dim(k + 1)))
        lhs = f_next * src.d(k)
        rhs = dst.d(k) * mats[k]
        if lhs != rhs:
            raise MathCheckError(f"chain map does not commute with d at degree {k}")
    return mats


def induced_map(src, dst, maps, k):
    """Matrix of the map on degree-k cohomology induced by a chain map.

    Solves for coordinates of each mapped representative in the basis
    [target representatives | target boundaries]; solvability is exactly the
    cycle condition, so a non chain map fails loudly here.
    """
    _, src_reps = src.cohomology(k)
    betti_dst, dst_reps = dst.cohomology(k)
    f = maps.get(k, Matrix(dst.dim(k), src.dim(k)))
    if not isinstance(f, Matrix):
        f = Matrix.from_rows(f, ncols=src.dim(k))
    bred, bpivots = dst._boundary_rref(k)
    boundary_rows = [bred.rows[i] for i in range(len(bpivots))]
    basis_cols = list(dst_reps) + boundary_rows
    basis = Matrix.from_rows(
        [[basis_cols[j][i] for j in range(len(basis_cols))]
         for i in range(dst.dim(k))] if basis_cols else [],
        ncols=len(basis_cols)) if dst.dim(k) else Matrix(0, len(basis_cols))
    cols = []
    for rep in src_reps:
        image = f.apply(rep)
        coords = solve(basis, image)
        if coords is None:
            raise MathCheckError(
                f"image of a cycle is not a cycle at degree {k}; not a chain map")
        cols.append(coords[:betti_dst])
    return Matrix(betti_dst, len(src_reps),
                  [[cols[j][i] for j in range(len(src_reps))]
                   for i in range(betti_dst)])


def is_isomorphism(m):
    return m.nrows == m.ncols and rank(m) == m.nrows
