"""Boundary words, their lattice embedding, and word extraction.

A boundary is a bi-infinite staircase of x (right) and y (up) steps with a
labelled vertex between consecutive steps.  Two shapes exist: periodic
(one repeating generator) and bi-generated (a left generator repeated to
-infinity, a distinguished root path, and a right generator repeated to
+infinity).  The affine type-D construction produces the bi-generated
shape, with the root carrying the fork products u1*u2 and u_n*u_{n+1}.

Coordinates are screen-like: columns grow rightward, rows grow downward,
so an x step moves (+1, 0) and a y step moves (0, -1) as the word index
increases, and the tiling lives strictly below the staircase (larger row).
The root's first vertex anchors at (0, 0); embeddings are lazy, with every
query answered through per-period index arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from friezelab.errors import InputError
from friezelab.exactalg import RationalFunction, parse_rational
from friezelab.quiver import Quiver, Seed, dtilde_n

__all__ = [
    "PathWord",
    "Generator",
    "BoundaryWord",
    "BoundaryEmbedding",
    "RootSpan",
    "build_dtilde_boundary",
    "generator_from_a_tilde",
    "is_admissible",
    "make_q_prime",
    "parse_boundary",
    "boundary_to_text",
    "transpose_word",
]

_ONE = RationalFunction.one()
X, Y = "x", "y"


def _check_letters(letters):
    for l in letters:
        if l not in (X, Y):
            raise InputError(f"letters must be 'x' or 'y', got {l!r}")


@dataclass(frozen=True)
class PathWord:
    """A finite alternating word c0 x1 c1 ... xm cm (one more value than letters)."""

    values: tuple
    letters: tuple

    def __post_init__(self):
        if len(self.values) != len(self.letters) + 1:
            raise InputError("a path word needs exactly one more value than letters")
        _check_letters(self.letters)

    def letter_string(self) -> str:
        return "".join(self.letters)

    def __str__(self):
        parts = [str(self.values[0])]
        for l, v in zip(self.letters, self.values[1:]):
            parts.append(l)
            parts.append(str(v))
        return " ".join(parts)


@dataclass(frozen=True)
class Generator:
    """One period of a periodic stretch; letters[i] joins values[i] to values[i+1 mod m]."""

    values: tuple
    letters: tuple

    def __post_init__(self):
        if not self.values or len(self.values) != len(self.letters):
            raise InputError("a generator needs equally many values and letters")
        _check_letters(self.letters)

    @property
    def period(self) -> int:
        return len(self.letters)

    def count(self, letter: str) -> int:
        return sum(1 for l in self.letters if l == letter)

    def letter_string(self) -> str:
        return "".join(self.letters)

    def __str__(self):
        parts = []
        for v, l in zip(self.values, self.letters):
            parts.append(str(v))
            parts.append(l)
        return " ".join(parts)


def transpose_word(word: PathWord) -> PathWord:
    """Redraw a path right-to-left: reverse the values, reverse and flip letters."""
    flipped = tuple(Y if l == X else X for l in reversed(word.letters))
    return PathWord(tuple(reversed(word.values)), flipped)


@dataclass(frozen=True)
class BoundaryWord:
    """An admissible-or-not boundary: periodic, or left/root/right bi-generated."""

    root: PathWord | None
    left: Generator | None
    right: Generator | None
    periodic: Generator | None = None

    @staticmethod
    def from_generator(gen: Generator) -> BoundaryWord:
        return BoundaryWord(root=None, left=None, right=None, periodic=gen)

    @staticmethod
    def bi_generated(left: Generator, root: PathWord, right: Generator) -> BoundaryWord:
        if left.values[0] != root.values[0]:
            raise InputError("left generator must share its first vertex with the root")
        if right.values[0] != root.values[-1]:
            raise InputError("right generator must share its first vertex with the root end")
        return BoundaryWord(root=root, left=left, right=right)

    @property
    def is_periodic(self) -> bool:
        return self.periodic is not None

    # index arithmetic over the bi-infinite word; vertex 0 is the anchor
    def value_at(self, i: int) -> RationalFunction:
        if self.periodic is not None:
            return self.periodic.values[i % self.periodic.period]
        r = len(self.root.values)
        if 0 <= i < r:
            return self.root.values[i]
        if i >= r:
            return self.right.values[(i - (r - 1)) % self.right.period]
        return self.left.values[i % self.left.period]

    def letter_at(self, i: int) -> str:
        if self.periodic is not None:
            return self.periodic.letters[i % self.periodic.period]
        r = len(self.root.values)
        if 0 <= i < r - 1:
            return self.root.letters[i]
        if i >= r - 1:
            return self.right.letters[(i - (r - 1)) % self.right.period]
        return self.left.letters[i % self.left.period]


def is_admissible(word: BoundaryWord) -> bool:
    """True iff neither infinite tail is ultimately constant (both letters recur)."""
    gens = [word.periodic] if word.is_periodic else [word.left, word.right]
    return all(g.count(X) > 0 and g.count(Y) > 0 for g in gens)


@dataclass(frozen=True)
class RootSpan:
    """Where the distinguished root sits: labels, word indices, coordinates."""

    sigma_labels: tuple
    indices: tuple
    coordinates: tuple
    values: tuple

    def coordinate_of_label(self, label: int) -> tuple[int, int]:
        return self.coordinates[self.sigma_labels.index(label)]


class BoundaryEmbedding:
    """Lazy lattice embedding of an admissible boundary word."""

    def __init__(self, word: BoundaryWord, anchor: tuple[int, int] = (0, 0)):
        if not is_admissible(word):
            raise InputError("boundary is not admissible (a tail is ultimately constant)")
        self.word = word
        self.anchor = anchor
        if word.is_periodic:
            self._right = word.periodic
            self._left = word.periodic
            self._root_len = 1
        else:
            self._right = word.right
            self._left = word.left
            self._root_len = len(word.root.values)
        # prefix displacement tables for one period on each side
        self._right_prefix = self._prefixes(self._right.letters)
        self._left_prefix = self._prefixes(self._left.letters)
        self._right_delta = self._right_prefix[-1]
        self._left_delta = self._left_prefix[-1]
        if not word.is_periodic:
            self._root_prefix = self._prefixes(word.root.letters)

    @staticmethod
    def _prefixes(letters):
        out = [(0, 0)]
        c = r = 0
        for l in letters:
            if l == X:
                c += 1
            else:
                r -= 1
            out.append((c, r))
        return out

    # -- index geometry -----------------------------------------------------

    def position(self, i: int) -> tuple[int, int]:
        """Lattice coordinates of vertex i (vertex 0 sits at the anchor)."""
        ac, ar = self.anchor
        if self.word.is_periodic:
            q, t = divmod(i, self._right.period)
            dc, dr = self._right_prefix[t]
            Dc, Dr = self._right_delta
            return (ac + q * Dc + dc, ar + q * Dr + dr)
        r = self._root_len
        if 0 <= i < r:
            dc, dr = self._root_prefix[i]
            return (ac + dc, ar + dr)
        if i >= r - 1:
            base_c, base_r = self._root_prefix[r - 1]
            q, t = divmod(i - (r - 1), self._right.period)
            dc, dr = self._right_prefix[t]
            Dc, Dr = self._right_delta
            return (ac + base_c + q * Dc + dc, ar + base_r + q * Dr + dr)
        q, t = divmod(i, self._left.period)  # q <= -1 here
        dc, dr = self._left_prefix[t]
        Dc, Dr = self._left_delta
        return (ac + q * Dc + dc, ar + q * Dr + dr)

    def value(self, i: int) -> RationalFunction:
        return self.word.value_at(i)

    def letter(self, i: int) -> str:
        return self.word.letter_at(i)

    def col(self, i: int) -> int:
        return self.position(i)[0]

    def row(self, i: int) -> int:
        return self.position(i)[1]

    def _search_up(self, pred) -> int:
        """Smallest index i with pred(i) true, for pred monotone in i."""
        if pred(0):
            hi, lo = 0, -1
            while pred(lo):
                hi = lo
                lo *= 2
        else:
            lo, hi = 0, 1
            while not pred(hi):
                lo = hi
                hi *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pred(mid):
                hi = mid
            else:
                lo = mid
        return hi

    def first_index_at_col(self, c: int) -> int:
        """Bottommost boundary vertex in column c (columns are nondecreasing in i)."""
        return self._search_up(lambda i: self.col(i) >= c)

    def last_index_at_col(self, c: int) -> int:
        return self._search_up(lambda i: self.col(i) >= c + 1) - 1

    def last_index_at_row(self, r: int) -> int:
        """Rightmost boundary vertex in row r (rows are nonincreasing in i)."""
        return self._search_up(lambda i: self.row(i) <= r - 1) - 1

    def bottom_row_of_col(self, c: int) -> int:
        return self.row(self.first_index_at_col(c))

    def top_row_of_col(self, c: int) -> int:
        return self.row(self.last_index_at_col(c))

    def is_boundary_vertex(self, point: tuple[int, int]) -> bool:
        c, r = point
        return self.top_row_of_col(c) <= r <= self.bottom_row_of_col(c)

    def vertex_value_at(self, point: tuple[int, int]) -> RationalFunction | None:
        c, r = point
        i0 = self.first_index_at_col(c)
        depth = self.row(i0) - r
        if depth < 0 or self.col(i0 + depth) != c:
            return None
        return self.value(i0 + depth)

    def is_below(self, point: tuple[int, int]) -> bool:
        c, r = point
        return r > self.bottom_row_of_col(c)

    # -- word extraction ------------------------------------------------------

    def subword(self, i: int, j: int) -> PathWord:
        """The finite boundary portion from vertex i to vertex j inclusive."""
        if j < i:
            raise InputError("empty word range")
        values = tuple(self.value(k) for k in range(i, j + 1))
        letters = tuple(self.letter(k) for k in range(i, j))
        return PathWord(values, letters)

    def word_at_point(self, point: tuple[int, int]) -> PathWord:
        """Boundary word delimited by the projections of a point strictly below.

        Runs from the lower end of the y step met by the leftward ray to the
        right end of the x step met by the upward ray; it always starts with
        y and ends with x.
        """
        c, r = point
        if not self.is_below(point):
            raise InputError(f"point {point} is on or above the boundary")
        start = self.last_index_at_row(r)
        end = self.first_index_at_col(c)
        word = self.subword(start, end)
        if word.letters[0] != Y or word.letters[-1] != X:
            raise InputError("malformed word extraction")  # pragma: no cover
        return word

    def word_for_columns(self, col_first: int, col_last: int) -> PathWord:
        """Boundary portion spanned by a column range, widened one step each way."""
        if col_first > col_last:
            raise InputError("empty column range")
        start = self.first_index_at_col(col_first) - 1
        end = self.last_index_at_col(col_last) + 1
        return self.subword(start, end)


# ---------------------------------------------------------------------------
# generators from cycle quivers of affine type A
# ---------------------------------------------------------------------------

def generator_from_a_tilde(seed: Seed, cut_vertex: int, direction: str = "clockwise") -> Generator:
    """Cut a cycle quiver at a vertex and read it around as x/y letters.

    The cyclic (clockwise) order is the ascending vertex-label order, which
    must agree with the cycle's adjacency.  Arrows along the reading
    direction become x, arrows against it become y.
    """
    q = seed.quiver
    labels = sorted(q.vertices)
    m = len(labels)
    if m < 3:
        raise InputError("a cycle quiver needs at least 3 vertices")
    for k, v in enumerate(labels):
        succ = labels[(k + 1) % m]
        if (v, succ) not in q.arrows and (succ, v) not in q.arrows:
            raise InputError("not a cycle quiver in label order")
    if sum(q.arrows.values()) != m:
        raise InputError("not a cycle quiver (wrong arrow count)")
    if cut_vertex not in q.vertices:
        raise InputError(f"unknown cut vertex {cut_vertex}")
    if direction not in ("clockwise", "anticlockwise"):
        raise InputError("direction must be clockwise or anticlockwise")
    startpos = labels.index(cut_vertex)
    step = 1 if direction == "clockwise" else -1
    order = [labels[(startpos + step * k) % m] for k in range(m)]
    letters = []
    for k in range(m):
        a, b = order[k], order[(k + 1) % m]
        if (a, b) in q.arrows:
            letters.append(X)
        elif (b, a) in q.arrows:
            letters.append(Y)
        else:  # pragma: no cover
            raise InputError("cycle adjacency broken")
    values = tuple(seed.variables[v] for v in order)
    return Generator(values, tuple(letters))


# ---------------------------------------------------------------------------
# the affine type-D boundary
# ---------------------------------------------------------------------------

def _sigma_labels(n: int) -> list[int]:
    return [1] + list(range(3, n)) + [n]


def _sigma_word(seed: Seed, n: int, mixed_substitution: bool) -> PathWord:
    """The root path: the type-A subquiver on 1, 3, ..., n-1, n with labels.

    Fork-end vertices carry the product of the two fork variables; under a
    mixed fork the substitute value u2(1+u3)/u1 (resp. the top analogue)
    replaces the product when mixed_substitution is set.
    """
    q = seed.quiver
    var = seed.variables
    labels = _sigma_labels(n)
    values = []
    for lab in labels:
        if lab == 1:
            if mixed_substitution and _fork_is_mixed(q, 3, 1, 2):
                values.append(var[2] * (1 + var[3]) / var[1])
            else:
                values.append(var[1] * var[2])
        elif lab == n:
            if mixed_substitution and _fork_is_mixed(q, n - 1, n, n + 1):
                values.append(var[n + 1] * (1 + var[n - 1]) / var[n])
            else:
                values.append(var[n] * var[n + 1])
        else:
            values.append(var[lab])
    letters = []
    for a, b in zip(labels, labels[1:]):
        if (a, b) in q.arrows:
            letters.append(X)
        elif (b, a) in q.arrows:
            letters.append(Y)
        else:  # pragma: no cover
            raise InputError("affine D diagram edge missing")
    return PathWord(tuple(values), tuple(letters))


def _fork_is_mixed(q: Quiver, joint: int, a: int, b: int) -> bool:
    return ((a, joint) in q.arrows) != ((b, joint) in q.arrows)


def build_dtilde_boundary(seed: Seed) -> tuple[BoundaryWord, RootSpan]:
    """The boundary inf(w1) root (w2)inf attached to an affine type-D seed.

    w1 = root xx transpose(root) xx and w2 = yy transpose(root) yy root,
    with the filler vertices carrying 1 (the auxiliary variable set to one).
    Mixed forks get the substitute endpoint value instead of a product.
    """
    n = dtilde_n(seed.quiver)
    if n is None:
        raise InputError("seed quiver is not of affine type D")
    root = _sigma_word(seed, n, mixed_substitution=True)
    t_root = transpose_word(root)
    w1 = Generator(
        root.values + (_ONE,) + t_root.values + (_ONE,),
        root.letters + (X, X) + t_root.letters + (X, X),
    )
    w2 = Generator(
        (root.values[-1], _ONE) + t_root.values + (_ONE,) + root.values[:-1],
        (Y, Y) + t_root.letters + (Y, Y) + root.letters,
    )
    word = BoundaryWord.bi_generated(w1, root, w2)
    embedding = BoundaryEmbedding(word)
    m = len(root.values)
    span = RootSpan(
        sigma_labels=tuple(_sigma_labels(n)),
        indices=tuple(range(m)),
        coordinates=tuple(embedding.position(i) for i in range(m)),
        values=root.values,
    )
    return word, span


def make_q_prime(seed: Seed) -> Seed:
    """The labelled 2n-cycle quiver used to cut the w1/w2 generators.

    Vertices 0..2n-1 run clockwise: the root path, a filler, the transposed
    path, a filler.  Values are the boundary labels (fillers carry 1).
    """
    n = dtilde_n(seed.quiver)
    if n is None:
        raise InputError("seed quiver is not of affine type D")
    root = _sigma_word(seed, n, mixed_substitution=True)
    t_root = transpose_word(root)
    m = len(root.values)
    values = list(root.values) + [_ONE] + list(t_root.values) + [_ONE]
    letters = list(root.letters) + [X, X] + list(t_root.letters) + [X, X]
    arrows = []
    total = 2 * n
    for i, letter in enumerate(letters):
        j = (i + 1) % total
        arrows.append((i, j) if letter == X else (j, i))
    quiver = Quiver(range(total), arrows)
    return Seed(quiver, dict(enumerate(values)))


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

def _parse_alternating(tokens: Sequence[str], cyclic: bool):
    values: list[RationalFunction] = []
    letters: list[str] = []
    expect_value = True
    for tok in tokens:
        if tok in (X, Y):
            if expect_value:
                values.append(_ONE)
            letters.append(tok)
            expect_value = True
        else:
            if not expect_value:
                raise InputError(f"two adjacent vertex values near {tok!r}")
            try:
                values.append(parse_rational(tok))
            except ValueError as exc:
                raise InputError(f"bad vertex value {tok!r}: {exc}") from exc
            expect_value = False
    if not letters:
        raise InputError("a boundary segment needs at least one letter")
    if cyclic:
        # a trailing letter wraps straight around to values[0]; a trailing
        # value must duplicate values[0] and is dropped
        if len(values) == len(letters) + 1:
            if values[0] != values[-1]:
                raise InputError("generator endpoints carry different values")
            values.pop()
        if len(values) != len(letters):
            raise InputError("generator values and letters do not alternate")
        return Generator(tuple(values), tuple(letters))
    if expect_value:
        values.append(_ONE)
    if len(values) != len(letters) + 1:
        raise InputError("root values and letters do not alternate")
    return PathWord(tuple(values), tuple(letters))


def parse_boundary(text: str) -> BoundaryWord:
    """Parse ``^inf( gen )^inf`` or ``^inf( gen ) root ( gen )^inf``.

    Tokens are whitespace separated; vertex values equal to one may be
    omitted, so ``^inf( x x x y )^inf`` is the all-ones staircase of period
    xxxy.
    """
    tokens = text.split()
    if not tokens or tokens[0] != "^inf(":
        raise InputError('boundary must start with "^inf("')
    body = tokens[1:]
    if ")^inf" in body:
        cut = body.index(")^inf")
        if ")" not in body[:cut]:
            if cut != len(body) - 1:
                raise InputError("trailing input after )^inf")
            return BoundaryWord.from_generator(_parse_alternating(body[:cut], cyclic=True))
    if ")" not in body:
        raise InputError("unterminated generator")
    close = body.index(")")
    left = _parse_alternating(body[:close], cyclic=True)
    rest = body[close + 1 :]
    if "(" not in rest:
        raise InputError("missing right generator")
    open2 = rest.index("(")
    root = _parse_alternating(rest[:open2], cyclic=False)
    tail = rest[open2 + 1 :]
    if not tail or tail[-1] != ")^inf":
        raise InputError('boundary must end with ")^inf"')
    right = _parse_alternating(tail[:-1], cyclic=True)
    return BoundaryWord.bi_generated(left, root, right)


def _value_token(v: RationalFunction) -> str:
    return str(v).replace(" ", "")


def _segment_text(values, letters, cyclic) -> str:
    parts = []
    for k, v in enumerate(values):
        if not v.is_one():
            parts.append(_value_token(v))
        if k < len(letters):
            parts.append(letters[k])
    return " ".join(parts)


def boundary_to_text(word: BoundaryWord) -> str:
    if word.is_periodic:
        return f"^inf( {_segment_text(word.periodic.values, word.periodic.letters, True)} )^inf"
    left = _segment_text(word.left.values, word.left.letters, True)
    root = _segment_text(word.root.values, word.root.letters, False)
    right = _segment_text(word.right.values, word.right.letters, True)
    return f"^inf( {left} ) {root} ( {right} )^inf"
