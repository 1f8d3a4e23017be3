"""Construction families producing splitter sets, codes, and lattices.

Each construction returns an object the checkers in :mod:`magball.splitting`
and :mod:`magball.lattice` can verify exhaustively; nothing here is trusted
without that oracle confirmation (the test suite wires the two together).
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import comb, factorial, gcd, log
from typing import Sequence

from .algebra import (
    FieldElement,
    FieldSpec,
    GroupSpec,
    discrete_log,
    factor_prime_power,
    find_primitive_polynomial,
    is_prime,
    subfield_elements,
)
from .ball import BallSpec, ball_size
from .errors import DomainError
from .lattice import LatticeBasis, basis_from_rows
from .limits import check
from .splitting import MagnitudeSet, SplitReport, SplitterSet, multiplicity_histogram


# ---------------------------------------------------------------------------
# B_t sets (Bose-Chowla) and their splitters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BtSet:
    """Subset of Z_N whose t-element multiset sums are distinct mod N."""

    N: int
    elements: tuple[int, ...]
    t: int
    provenance: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(sorted(int(a) % self.N for a in self.elements)))
        if len(set(self.elements)) != len(self.elements):
            raise DomainError("B_t set elements must be distinct")


@dataclass(frozen=True)
class S2Data:
    """The size-(q+1) B_t set over Z_{(q^{t+1}-1)/(q-1)} plus the field data
    behind it: for every i, ``beta_i * eta^{s_i} == eta + alpha_i``."""

    bt: BtSet
    field: FieldSpec
    q: int
    t: int
    N: int
    alphas: tuple[FieldElement, ...]
    svals: tuple[int, ...]
    betas: tuple[FieldElement, ...]


def bose_chowla_s1(q: int, t: int) -> BtSet:
    """B_t set of size q inside Z_{q^t - 1}, from discrete logs of x + alpha."""
    if t < 2:
        raise DomainError("need t >= 2")
    p, m = factor_prime_power(q)
    field = find_primitive_polynomial(p, m * t)
    xi = field.gen()
    N = q**t - 1
    logs = [
        discrete_log(field, field.add(xi, alpha))
        for alpha in subfield_elements(field, q)
    ]
    return BtSet(N, tuple(sorted(logs)), t, "S1")


def bose_chowla_s2(q: int, t: int) -> S2Data:
    """B_t set of size q + 1 inside Z_{(q^{t+1}-1)/(q-1)}, together with the
    subfield factorisations used by the decoder."""
    if t < 2:
        raise DomainError("need t >= 2")
    p, m = factor_prime_power(q)
    field = find_primitive_polynomial(p, m * (t + 1))
    eta = field.gen()
    total = q ** (t + 1) - 1
    N = total // (q - 1)
    alphas = tuple(subfield_elements(field, q))
    svals = []
    betas = []
    for alpha in alphas:
        d = discrete_log(field, field.add(eta, alpha))
        s, j = d % N, d // N
        svals.append(s)
        betas.append(field.power_of_gen(j * N) if j else field.one())
    elements = set(svals) | {0}
    if len(elements) != q + 1:
        raise DomainError("degenerate S2 data: s-values are not distinct and nonzero")
    bt = BtSet(N, tuple(sorted(elements)), t, "S2")
    return S2Data(bt, field, q, t, N, alphas, tuple(svals), tuple(betas))


def is_bt_set(
    elements: Sequence[int], N: int, t: int
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Exhaustive multiset-sum distinctness check; returns the first colliding
    pair of multisets on failure."""
    A = sorted(set(int(a) % N for a in elements))
    check("enumeration", comb(len(A) + t - 1, t) if A else 0)
    seen: dict[int, tuple[int, ...]] = {}
    for multiset in combinations_with_replacement(A, t):
        s = sum(multiset) % N
        if s in seen:
            return False, (seen[s], multiset)
        seen[s] = multiset
    return True, None


def search_bt_set(N: int, t: int, target_size: int) -> tuple[BtSet, bool]:
    """Deterministic backtracking for a B_t set of the requested size; returns
    the first set found or the maximum-size set seen, with a reached flag."""
    best: list[int] = []

    def extend(current: list[int], start: int) -> list[int] | None:
        nonlocal best
        if len(current) > len(best):
            best = list(current)
        if len(current) >= target_size:
            return current
        for y in range(start, N):
            cand = current + [y]
            ok, _ = is_bt_set(cand, N, t)
            if ok:
                hit = extend(cand, y + 1)
                if hit is not None:
                    return hit
        return None

    found = extend([], 0)
    if found is not None:
        return BtSet(N, tuple(found), t, "search"), True
    return BtSet(N, tuple(best), t, "search"), False


def bt_shift_to_splitter(bt: BtSet) -> SplitterSet:
    """Shift so the smallest element sits at 0, drop it, and split Z_N with
    coefficients {1}."""
    if len(bt.elements) < 2:
        raise DomainError("need at least two elements to build a splitter")
    a1 = bt.elements[0]
    shifted = sorted((a - a1) % bt.N for a in bt.elements)
    group = GroupSpec((bt.N,))
    elements = tuple(group.element((s,)) for s in shifted if s != 0)
    return SplitterSet(group, elements, MagnitudeSet(1, 0), bt.t)


def bt_pm1_splitter(bt: BtSet, t: int) -> SplitterSet:
    """Embed a B_t set as {(a_i, 1)} in Z_N x Z_{2t+1}, split with {-1, 1}."""
    if t > bt.t:
        raise DomainError(f"set strength {bt.t} is below the requested t = {t}")
    group = GroupSpec((bt.N, 2 * t + 1))
    elements = tuple(group.element((a, 1)) for a in bt.elements)
    return SplitterSet(group, elements, MagnitudeSet(1, 1), t)


# ---------------------------------------------------------------------------
# k-fold Sidon sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SidonParams:
    N: int
    k: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(sorted(int(a) % self.N for a in self.elements)))
        if gcd(self.N, factorial(self.k)) != 1:
            raise DomainError("N must be coprime to k!")


def _trivial_solution(cs: tuple[int, int, int, int], xs: tuple[int, int, int, int]) -> bool:
    # Trivial means: the nonzero-coefficient indices admit a partition into
    # two zero-coefficient-sum parts with x constant on each part.
    nz = [i for i in range(4) if cs[i] != 0]
    for mask in range(1 << len(nz)):
        part = [nz[b] for b in range(len(nz)) if mask >> b & 1]
        rest = [i for i in nz if i not in part]
        if sum(cs[i] for i in part) != 0:
            continue
        if len({xs[i] for i in part}) <= 1 and len({xs[i] for i in rest}) <= 1:
            return True
    return False


def is_kfold_sidon(
    elements: Sequence[int], N: int, k: int
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Check that every length-4 relation with coefficients in [-k, k] summing
    to zero has only trivial solutions; returns (coefficients, solution) on
    failure."""
    if gcd(N, factorial(k)) != 1:
        raise DomainError("N must be coprime to k!")
    A = sorted(set(int(a) % N for a in elements))
    check("enumeration", len(A) ** 4 * (2 * k + 1) ** 3)
    coeff_range = range(-k, k + 1)
    for c1, c2, c3 in product(coeff_range, repeat=3):
        c4 = -(c1 + c2 + c3)
        if not -k <= c4 <= k:
            continue
        cs = (c1, c2, c3, c4)
        if cs == (0, 0, 0, 0):
            continue
        # Meet in the middle: c1 x1 + c2 x2 == -(c3 x3 + c4 x4) mod N.
        left: dict[int, list[tuple[int, int]]] = {}
        for x1 in A:
            for x2 in A:
                left.setdefault((c1 * x1 + c2 * x2) % N, []).append((x1, x2))
        for x3 in A:
            for x4 in A:
                for x1, x2 in left.get((-(c3 * x3 + c4 * x4)) % N, ()):
                    xs = (x1, x2, x3, x4)
                    if not _trivial_solution(cs, xs):
                        return False, (cs, xs)
    return True, None


def search_kfold_sidon(N: int, k: int, target_size: int) -> tuple[SidonParams, bool]:
    """Deterministic backtracking over Z_N in increasing order, extending while
    the k-fold Sidon property holds."""
    if gcd(N, factorial(k)) != 1:
        raise DomainError("N must be coprime to k!")
    best: list[int] = []

    def extend(current: list[int], start: int) -> list[int] | None:
        nonlocal best
        if len(current) > len(best):
            best = list(current)
        if len(current) >= target_size:
            return current
        for y in range(start, N):
            cand = current + [y]
            ok, _ = is_kfold_sidon(cand, N, k)
            if ok:
                hit = extend(cand, y + 1)
                if hit is not None:
                    return hit
        return None

    found = extend([], 0)
    if found is not None:
        return SidonParams(N, k, tuple(found)), True
    return SidonParams(N, k, tuple(best)), False


def kfold_sidon_splitter(params: SidonParams, kplus: int, kminus: int) -> SplitterSet:
    """Embed a k-fold Sidon set as {(1, x)} in Z_{2(kplus+kminus)+1} x Z_N and
    split with coefficients [-kminus, kplus]*; always t = 2."""
    if not 0 <= kminus <= kplus <= params.k:
        raise DomainError("need 0 <= kminus <= kplus <= the Sidon fold k")
    if kplus + kminus < 1:
        raise DomainError("need kplus + kminus >= 1")
    if len(params.elements) < 2:
        raise DomainError("need at least two set elements for a 2-split")
    group = GroupSpec((2 * (kplus + kminus) + 1, params.N))
    elements = tuple(group.element((1, x)) for x in params.elements)
    return SplitterSet(group, elements, MagnitudeSet(kplus, kminus), 2)


# ---------------------------------------------------------------------------
# Behrend-sphere construction (t = 2, kplus <= 3)
# ---------------------------------------------------------------------------


def behrend_sphere_sets(D: int, K: int, alpha: int) -> dict[int, tuple[int, ...]]:
    """Partition the base-(alpha K + 1) encodings of digit vectors in [0, K]^D
    by squared Euclidean norm."""
    if D < 2 or K < 1:
        raise DomainError("need D >= 2 and K >= 1")
    base = alpha * K + 1
    out: dict[int, list[int]] = {}
    for digits in product(range(K + 1), repeat=D):
        x = sum(d * base**i for i, d in enumerate(digits))
        out.setdefault(sum(d * d for d in digits), []).append(x)
    return {m: tuple(sorted(xs)) for m, xs in sorted(out.items())}


def behrend_ruzsa_splitter(
    kplus: int, kminus: int, D: int, K: int, p: int
) -> SplitterSet:
    """Splitter {(1, x, x^2)} over Z_{3kplus+2kminus+1} x Z_p x Z_p built from
    the largest sphere class; t = 2, valid only for kplus <= 3."""
    if not 0 <= kminus <= kplus:
        raise DomainError("need 0 <= kminus <= kplus")
    if kplus + kminus < 1:
        raise DomainError("need kplus + kminus >= 1")
    if kplus > 3:
        raise DomainError("kplus <= 3 is required; the square/nonresidue "
                          "dichotomy for coefficient products fails beyond it")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p % 12 not in (5, 7):
        raise DomainError(f"{p} is not congruent to +-5 mod 12")
    alpha = max(2 * kplus * kplus, 3)
    if (alpha * K + 1) ** D > p:
        raise DomainError(f"(alpha K + 1)^D = {(alpha * K + 1) ** D} exceeds p = {p}")
    classes = behrend_sphere_sets(D, K, alpha)
    best_size = max(len(xs) for xs in classes.values())
    best_m = min(m for m, xs in classes.items() if len(xs) == best_size)
    group = GroupSpec((3 * kplus + 2 * kminus + 1, p, p))
    elements = tuple(
        group.element((1, x % p, x * x % p)) for x in classes[best_m]
    )
    return SplitterSet(group, elements, MagnitudeSet(kplus, kminus), 2)


# ---------------------------------------------------------------------------
# Linear codes, BCH, and code lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearCode:
    """[n, k, >=d] linear code over F_p given by generator and parity-check
    matrices (rows are codewords / checks)."""

    p: int
    n: int
    k: int
    generator: tuple[tuple[int, ...], ...]
    parity_check: tuple[tuple[int, ...], ...]
    d: int

    def __post_init__(self) -> None:
        G, H = self.generator, self.parity_check
        if len(G) != self.k or any(len(r) != self.n for r in G):
            raise DomainError("generator matrix has the wrong shape")
        if len(H) != self.n - self.k or any(len(r) != self.n for r in H):
            raise DomainError("parity-check matrix has the wrong shape")
        for g in G:
            for h in H:
                if sum(a * b for a, b in zip(g, h)) % self.p:
                    raise DomainError("generator and parity-check are inconsistent")
        if _rank_mod_p([list(r) for r in G], self.p) != self.k:
            raise DomainError("generator matrix is rank deficient")

    def syndrome(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(
            sum(a * b for a, b in zip(h, v)) % self.p for h in self.parity_check
        )

    def codewords(self):
        """All p^k codewords (gated by the enumeration limit)."""
        check("enumeration", self.p**self.k)
        for msg in product(range(self.p), repeat=self.k):
            yield tuple(
                sum(m * g[j] for m, g in zip(msg, self.generator)) % self.p
                for j in range(self.n)
            )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "generator": [list(r) for r in self.generator],
            "parity_check": [list(r) for r in self.parity_check],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearCode":
        return cls(
            int(data["p"]),
            int(data["n"]),
            int(data["k"]),
            tuple(tuple(int(x) for x in r) for r in data["generator"]),
            tuple(tuple(int(x) for x in r) for r in data["parity_check"]),
            int(data["d"]),
        )


def _rank_mod_p(matrix: list[list[int]], p: int) -> int:
    M = [[x % p for x in row] for row in matrix]
    rank = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def min_distance(code: LinearCode) -> int:
    """Brute-force minimum Hamming weight over all nonzero codewords."""
    best = code.n + 1
    for word in code.codewords():
        w = sum(1 for x in word if x)
        if 0 < w < best:
            best = w
    return best


def cyclotomic_coset(j: int, n: int, p: int) -> tuple[int, ...]:
    coset = {j % n}
    cur = j * p % n
    while cur not in coset:
        coset.add(cur)
        cur = cur * p % n
    return tuple(sorted(coset))


def bch_code(p: int, m: int, d: int) -> LinearCode:
    """Primitive BCH code of length p^m - 1 and designed distance ``d``.

    The defining set starts from the cyclotomic cosets of 1..d-1.  Repeated
    cosets can leave the generator degree below the classical dimension target
    ``n - ceil((d-1)(1-1/p)) m``; in that case the defining set is padded with
    the smallest-representative unused cosets that fit the gap exactly, which
    keeps the code cyclic and cannot decrease the distance.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    n = p**m - 1
    if not 2 <= d <= n:
        raise DomainError(f"designed distance must be in [2, {n}]")
    field = find_primitive_polynomial(p, m)
    narrow: set[int] = set()
    for j in range(1, d):
        narrow.update(cyclotomic_coset(j, n, p))
    target_degree = ((d - 1) - (d - 1) // p) * m
    defining = set(narrow)
    if len(defining) < target_degree:
        for j in range(n):
            if j in defining:
                continue
            coset = cyclotomic_coset(j, n, p)
            if len(defining) + len(coset) <= target_degree:
                defining.update(coset)
            if len(defining) == target_degree:
                break
        if len(defining) != target_degree:
            defining = narrow  # no exact fill exists; keep the plain code
    if len(defining) != target_degree:
        warnings.warn(
            f"BCH({p},{m},{d}) dimension {n - len(defining)} exceeds the "
            f"classical value {n - target_degree}",
            stacklevel=2,
        )
    g = _generator_from_roots(field, sorted(defining))
    k = n - (len(g) - 1)
    if k < 1:
        raise DomainError("designed distance leaves no information symbols")
    generator = tuple(
        tuple(([0] * i + list(g) + [0] * (n - len(g) - i))[j] for j in range(n))
        for i in range(k)
    )
    h = _poly_divmod_p([-1] + [0] * (n - 1) + [1], list(g), p)
    h_rev = list(reversed(h))
    parity = tuple(
        tuple(([0] * i + h_rev + [0] * (n - len(h_rev) - i))[j] for j in range(n))
        for i in range(n - k)
    )
    code = LinearCode(p, n, k, generator, parity, d)
    if p**k <= 4096 and min_distance(code) < d:
        raise DomainError("designed distance not met; construction is broken")
    return code


def _generator_from_roots(field: FieldSpec, exponents: Sequence[int]) -> tuple[int, ...]:
    """prod (x - xi^j) as a polynomial over the prime field."""
    poly: list[FieldElement] = [field.one()]
    for j in exponents:
        root = field.power_of_gen(j)
        # multiply poly by (x - root)
        nxt: list[FieldElement] = [field.zero()] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = field.add(nxt[i + 1], c)
            nxt[i] = field.sub(nxt[i], field.mul(c, root))
        poly = nxt
    out = []
    for c in poly:
        if any(c[1:]):
            raise DomainError("generator polynomial left the prime field")
        out.append(c[0])
    return tuple(out)


def _poly_divmod_p(num: list[int], den: list[int], p: int) -> list[int]:
    """Quotient of num / den over F_p; raises if the division is not exact."""
    num = [x % p for x in num]
    den = [x % p for x in den]
    while den and den[-1] == 0:
        den.pop()
    inv_lead = pow(den[-1], -1, p)
    quot = [0] * (len(num) - len(den) + 1)
    rem = list(num)
    for i in range(len(quot) - 1, -1, -1):
        coef = (rem[i + len(den) - 1] * inv_lead) % p
        quot[i] = coef
        if coef:
            for j, dc in enumerate(den):
                rem[i + j] = (rem[i + j] - coef * dc) % p
    if any(rem):
        raise DomainError("polynomial division was not exact")
    return quot


def code_lattice(code: LinearCode, kplus: int, kminus: int) -> LatticeBasis:
    """Lift a linear code to the integer lattice of vectors that reduce into
    it mod p; requires kplus + kminus < p."""
    if kplus + kminus >= code.p:
        raise DomainError("need kplus + kminus < p for the code lattice")
    rows = [list(r) for r in code.generator]
    rows.extend(
        [code.p if i == j else 0 for j in range(code.n)] for i in range(code.n)
    )
    basis = basis_from_rows(rows, code.n, source=f"code[{code.n},{code.k}]_{code.p}")
    expected = code.p ** (code.n - code.k)
    if basis.volume != expected:
        raise DomainError(
            f"code lattice volume {basis.volume} != p^(n-k) = {expected}"
        )
    return basis


@dataclass(frozen=True)
class NonlinearPacking:
    """Packing descriptor for a translate set lifted from an explicit code."""

    verdict: str
    q: int
    codewords: tuple[tuple[int, ...], ...]
    ball: BallSpec
    density: Fraction
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def nonlinear_code_pack(
    codewords: Sequence[Sequence[int]], q: int, kplus: int, kminus: int, t: int
) -> NonlinearPacking:
    """Verify distance >= 2t+1 and the torus packing for an explicit q-ary code.

    The lifted translate set has period q per coordinate, so packing Z^n is
    equivalent to the translates being disjoint on the torus Z_q^n.
    """
    words = tuple(tuple(int(x) % q for x in w) for w in codewords)
    if not words:
        raise DomainError("code must be nonempty")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise DomainError("codewords must share one length")
    if len(set(words)) != len(words):
        raise DomainError("codewords must be distinct")
    if kplus + kminus >= q:
        raise DomainError("need kplus + kminus < q")
    ball = BallSpec(n, t, kplus, kminus)
    dens = Fraction(len(words) * ball_size(ball), q**n)
    for a, b in combinations(words, 2):
        if sum(1 for x, y in zip(a, b) if x != y) < 2 * t + 1:
            return NonlinearPacking("refuted", q, words, ball, dens, witness=(a, b))
    check("enumeration", len(words) * ball_size(ball))
    from .ball import enumerate_ball

    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for w in words:
        for e in enumerate_ball(ball):
            point = tuple((x + y) % q for x, y in zip(w, e))
            other = seen.get(point)
            if other is not None and other != w:
                return NonlinearPacking(
                    "refuted", q, words, ball, dens, witness=(other, w)
                )
            if other == w:
                return NonlinearPacking(
                    "refuted", q, words, ball, dens, witness=(w, w)
                )
            seen[point] = w
    return NonlinearPacking("verified", q, words, ball, dens)


# ---------------------------------------------------------------------------
# Coverings
# ---------------------------------------------------------------------------


def covering_base_split(p: int, m: int, kplus: int, kminus: int) -> SplitterSet:
    """Complete (in fact tiling) 1-split of Z_{p^m} by the set of residues
    whose least significant nonzero base-p digit is 1, with coefficients
    [-kminus, p-1-kminus]*."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if m < 1:
        raise DomainError("need m >= 1")
    if p > kplus + kminus + 1:
        raise DomainError("need p <= kplus + kminus + 1 so coefficients stay in range")
    kp_eff = p - 1 - kminus
    if kp_eff < kminus:
        raise DomainError(
            "need p >= 2 kminus + 1 for a well-formed coefficient interval"
        )
    order = p**m
    check("group_order", order)
    members = []
    for a in range(1, order):
        r = a
        while r % p == 0:
            r //= p
        if r % p == 1:
            members.append(a)
    if len(members) != (order - 1) // (p - 1):
        raise AssertionError("digit set has the wrong size")
    group = GroupSpec((order,))
    elements = tuple(group.element((a,)) for a in members)
    return SplitterSet(group, elements, MagnitudeSet(kp_eff, kminus), 1)


def product_splitter(base: SplitterSet, t: int) -> SplitterSet:
    """Embed t coordinate copies of a complete 1-split into G^t, giving a
    complete t-split with n = t |S|."""
    if base.t != 1:
        raise DomainError("product construction needs a 1-split as its base")
    if t < 1:
        raise DomainError("need t >= 1")
    if t == 1:
        return base
    moduli = base.group.moduli * t
    group = GroupSpec(moduli)
    rank = base.group.rank
    elements = []
    for block in range(t):
        for s in base.elements:
            residues = [0] * (rank * t)
            residues[block * rank : (block + 1) * rank] = list(s.residues)
            elements.append(group.element(residues))
    return SplitterSet(group, tuple(elements), base.magnitudes, t)


def hamming_covering_baseline(
    n: int, t: int, kplus: int, kminus: int, ell: int
) -> Fraction:
    """Density of the generic covering-code baseline of size
    ceil(n ell^n ln(ell) / |B|), with ln(ell) replaced by a rational upper
    bound of relative error below 1e-6."""
    if ell < 2:
        raise DomainError("need an alphabet of size >= 2")
    size = ball_size(BallSpec(n, t, kplus, kminus))
    ln_up = Fraction(int(log(ell) * 10**9) + 1, 10**9)
    codewords = -((-(n * ell**n) * ln_up.numerator) // (ln_up.denominator * size))
    return Fraction(codewords * size, ell**n)


# ---------------------------------------------------------------------------
# Random lambda-packing sampler
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaSample:
    splitter: SplitterSet
    report: SplitReport
    lambda_: int
    size_in_range: bool
    expected_size: float


def _include(N: int, seed: int, i: int, prob: float) -> bool:
    # Counter-based draw keyed by (modulus, seed, index): stable across
    # platforms and shardable by index.
    digest = hashlib.sha256(f"{N}:{seed}:{i}".encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2**64 < prob


def sample_lambda_splitter(
    N: int,
    t: int,
    kplus: int,
    kminus: int,
    epsilon: float,
    seed: int,
    jobs: int = 1,
) -> LambdaSample:
    """Sample each residue of Z_N independently with probability
    N^(1/t - 1 - epsilon) and measure the resulting list size lambda."""
    if gcd(N, factorial(kplus)) != 1:
        raise DomainError("N must be coprime to kplus!")
    if t < 1 or not 0 < epsilon < 1 / t:
        raise DomainError("need t >= 1 and 0 < epsilon < 1/t")
    prob = N ** (1 / t - 1 - epsilon)
    members = [i for i in range(N) if _include(N, seed, i, prob)]
    if len(members) < t:
        raise DomainError(
            f"seed {seed} produced only {len(members)} elements; need at least t = {t}"
        )
    group = GroupSpec((N,))
    splitter = SplitterSet(
        group,
        tuple(group.element((a,)) for a in members),
        MagnitudeSet(kplus, kminus),
        t,
    )
    report = multiplicity_histogram(splitter, jobs=jobs)
    expected = N ** (1 / t - epsilon)
    in_range = expected / 2 <= len(members) <= 1.5 * expected
    assert report.lambda_ is not None
    return LambdaSample(splitter, report, report.lambda_, in_range, expected)
