"""Parser and printer for the tuple notation of nilpotent Lie algebras.

A tuple like "(0,0,0,0,12,14+23)" lists, per dual basis vector e^k, the
2-form d e^k as a signed sum of index pairs "ij" (meaning e^i ^ e^j).
With the convention (d f)(x ^ y) = -f([x, y]), a term +"ij" in slot k
yields [e_i, e_j] = -e_k.  Pair order matters: "42" is e^4 ^ e^2 and
contributes with the opposite sign to "24".

Grammar (whitespace ignored between tokens):

    tuple := "(" entry ("," entry)* ")"
    entry := "0" | ["-"] term (("+"|"-") term)*
    term  := digit digit          with digits in 1..9
"""

from __future__ import annotations

from .lie import LieAlgebra
from .linalg import Q


class SalamonError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "(),+-0":
            tokens.append((ch, i))
            i += 1
            continue
        if ch.isdigit():
            if i + 1 < len(text) and text[i + 1].isdigit():
                a, b = int(ch), int(text[i + 1])
                if a == 0 or b == 0:
                    raise SalamonError("term digits must be in 1..9", i)
                tokens.append((("term", a, b), i))
                i += 2
                continue
            raise SalamonError("a term needs exactly two digits", i)
        raise SalamonError(f"unexpected character {ch!r}", i)
    return tokens


def parse_salamon(text: str) -> LieAlgebra:
    """Parse a tuple string into the Lie algebra it denotes."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise SalamonError("unexpected end of input", len(text))
        tok, at = tokens[pos]
        if expected is not None and tok != expected:
            raise SalamonError(f"expected {expected!r}", at)
        pos += 1
        return tok, at

    take("(")
    entries = []
    while True:
        # one entry: "0" or a signed sum of terms
        terms = []
        if peek() == "0":
            take()
        else:
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            while True:
                tok, at = take()
                if not (isinstance(tok, tuple) and tok[0] == "term"):
                    raise SalamonError("expected a two-digit term", at)
                terms.append((sign, tok[1], tok[2], at))
                if peek() in ("+", "-"):
                    sign = 1 if take()[0] == "+" else -1
                else:
                    break
        entries.append(terms)
        if peek() == ",":
            take()
            continue
        take(")")
        break
    if pos != len(tokens):
        raise SalamonError("trailing input after tuple", tokens[pos][1])

    dim = len(entries)
    brackets: dict[tuple[int, int], dict[int, Q]] = {}
    for k, terms in enumerate(entries, start=1):
        for sign, a, b, at in terms:
            if a == b:
                raise SalamonError(f"degenerate pair {a}{b}", at)
            if a >= k or b >= k:
                raise SalamonError(
                    f"triangularity violation: pair {a}{b} in slot {k} needs indices < {k}", at
                )
            # d e^k contains sign * e^a ^ e^b, so [e_a, e_b] gets -sign * e_k
            i, j, s = (a, b, sign) if a < b else (b, a, -sign)
            coeffs = brackets.setdefault((i - 1, j - 1), {})
            coeffs[k - 1] = coeffs.get(k - 1, Q(0)) - s
    brackets = {
        pair: {k: c for k, c in coeffs.items() if c != 0}
        for pair, coeffs in brackets.items()
    }
    return LieAlgebra.from_brackets(dim, brackets)


def emit_salamon(g: LieAlgebra) -> str:
    """Canonical tuple string of a triangular structure-constant table.

    Negative unit coefficients are written as reversed positive pairs
    ("42" rather than "-24"); terms are sorted as written.
    """
    n = g.dim
    entries = []
    for k in range(n):
        terms = []
        for i in range(n):
            for j in range(i + 1, n):
                c = g.c(i, j, k)
                if c == 0:
                    continue
                if i >= k or j >= k:
                    raise SalamonError(
                        f"not triangular: [e_{i+1}, e_{j+1}] hits e_{k+1}"
                    )
                s = -c
                if s == 1:
                    terms.append((i + 1, j + 1))
                elif s == -1:
                    terms.append((j + 1, i + 1))
                else:
                    raise SalamonError(
                        f"coefficient {s} of e^{i+1}^e^{j+1} in d e^{k+1} is not a unit;"
                        " change basis before emitting"
                    )
        if not terms:
            entries.append("0")
        else:
            terms.sort()
            entries.append("+".join(f"{a}{b}" for a, b in terms))
    return "(" + ",".join(entries) + ")"


def differential(g: LieAlgebra) -> list[dict[tuple[int, int], Q]]:
    """d e^k as {(i, j): coeff} with i < j, for each k (0-based)."""
    out = []
    for k in range(g.dim):
        form = {}
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                c = g.c(i, j, k)
                if c != 0:
                    form[(i, j)] = -c
        out.append(form)
    return out


def d_squared_is_zero(g: LieAlgebra) -> bool:
    """Check d^2 = 0 on the dual basis via formal form arithmetic.

    Independent of jacobi_defect: works on wedge coefficients only.
    """
    d1 = differential(g)

    def wedge21(two: dict[tuple[int, int], Q], c: int, sign: Q):
        # (e^a ^ e^b) ^ e^c, accumulated into a 3-form dict
        out: dict[tuple[int, int, int], Q] = {}
        for (a, b), coeff in two.items():
            if c == a or c == b:
                continue
            idx = sorted((a, b, c))
            perm = (a, b, c)
            # parity of sorting the triple
            swaps = sum(
                1
                for x in range(3)
                for y in range(x + 1, 3)
                if perm[x] > perm[y]
            )
            s = coeff * sign * (-1 if swaps % 2 else 1)
            key = tuple(idx)
            out[key] = out.get(key, Q(0)) + s
        return out

    for k in range(g.dim):
        total: dict[tuple[int, int, int], Q] = {}
        for (i, j), coeff in d1[k].items():
            # d(e^i ^ e^j) = d e^i ^ e^j - e^i ^ d e^j
            for key, s in wedge21(d1[i], j, coeff).items():
                total[key] = total.get(key, Q(0)) + s
            for key, s in wedge21(d1[j], i, -coeff).items():
                total[key] = total.get(key, Q(0)) + s
        if any(v != 0 for v in total.values()):
            return False
    return True
