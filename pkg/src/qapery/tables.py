"""Published Apéry constants, transcribed as data for the reproduction harness.

Entry syntax: a zeta polynomial in the display format of
:func:`qapery.zetaid.format_paper_style`; ``0_k`` is a vanishing constant of
primitive codimension k; a bare ``0`` is a vanishing constant of unstated
codimension; a leading ``±`` marks an entry whose sign the source leaves open.
Rows list only the entries printed in the source; trailing "..." are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Row:
    spec: str
    mu: int
    entries: tuple
    terms: int = 200
    slow: bool = False  # skipped unless explicitly requested
    note: str = ""


def _r(spec, mu, *entries, terms=200, slow=False, note=""):
    return Row(spec, mu, tuple(entries), terms, slow, note)


TABLES: dict[str, list[Row]] = {
    "gr2": [
        _r("Gr(2,4)", 2, "0_2"),
        _r("Gr(2,5)", 2, "ζ(2)"),
        _r("Gr(2,6)", 3, "2 ζ(2)", "0_4"),
        _r("Gr(2,7)", 3, "3 ζ(2)", "27/4 ζ(4)"),
        _r("Gr(2,8)", 4, "4 ζ(2)", "16 ζ(4)", "0_6"),
        _r("Gr(2,9)", 4, "5 ζ(2)", "111/4 ζ(4)", "675/16 ζ(6)"),
        _r("Gr(2,10)", 5, "6 ζ(2)", "42 ζ(4)", "108 ζ(6)", "0_8"),
        _r("Gr(2,11)", 5, "7 ζ(2)", "235/4 ζ(4)", "3229/16 ζ(6)", "18375/64 ζ(8)"),
        _r("Gr(2,12)", 6, "8 ζ(2)", "78 ζ(4)", "328 ζ(6)", "768 ζ(8)"),
        _r("Gr(2,13)", 6, "9 ζ(2)", "399/4 ζ(4)", "7855/16 ζ(6)", "96111/64 ζ(8)"),
        _r("Gr(2,14)", 7, "10 ζ(2)", "124 ζ(4)", "695 ζ(6)", "7664/3 ζ(8)", slow=True),
        _r("Gr(2,15)", 7, "11 ζ(2)", "603/4 ζ(4)", "15113/16 ζ(6)", "768085/192 ζ(8)", slow=True),
    ],
    "gr3": [
        _r("Gr(3,6)", 3, "0_2", "-6 ζ(3)"),
        _r("Gr(3,7)", 4, "ζ(2)", "-7 ζ(3)", "-17/4 ζ(4)", "-49/2 ζ(3)^2 - 945/16 ζ(6)"),
        _r("Gr(3,8)", 5, "2 ζ(2)", "-8 ζ(3)", "0_4", "-8 ζ(2)ζ(3) - 4 ζ(5)", "-32 ζ(3)^2 - 62 ζ(6)"),
        _r(
            "Gr(3,9)", 8, "3 ζ(2)", "-9 ζ(3)", "27/4 ζ(4)", "-27/2 ζ(2)ζ(3) - 9/2 ζ(5)",
            "±81/2 ζ(3)^2 + 871/16 ζ(6)",
        ),
        _r(
            "Gr(3,10)", 10, "4 ζ(2)", "-10 ζ(3)", "16 ζ(4)", "-20 ζ(2)ζ(3) - 5 ζ(5)",
            "±50 ζ(3)^2 + 32 ζ(6)", slow=True,
        ),
        _r(
            "Gr(3,11)", 13, "5 ζ(2)", "-11 ζ(3)", "111/4 ζ(4)", "-55/2 ζ(2)ζ(3) - 11/2 ζ(5)",
            "-121/2 ζ(3)^2 + 155/16 ζ(6)", "-121/2 ζ(3)^2 + 65/16 ζ(6)", slow=True,
        ),
    ],
    "gr4plus": [
        _r("Gr(4,8)", 8, "0_2", "-8 ζ(3)", "-6 ζ(4)", "0_4", "32 ζ(3)^2 + 50 ζ(6)", "32 ζ(3)^2 + 50 ζ(6)", "0_8"),
        _r(
            "Gr(4,9)", 12, "ζ(2)", "-9 ζ(3)", "21/4 ζ(4)", "ζ(4)", "-9/2 ζ(2)ζ(3) - 9/2 ζ(5)",
            "81/2 ζ(3)^2 + 627/16 ζ(6)", "81/2 ζ(3)^2 + 309/16 ζ(6)",
        ),
        _r(
            "Gr(4,10)", 18, "2 ζ(2)", "-10 ζ(3)", "-2 ζ(4)", "2 ζ(4)", "-10 ζ(2)ζ(3) - 5 ζ(5)",
            "50 ζ(3)^2 + 31 ζ(6)", "50 ζ(3)^2", "0_6",
        ),
        _r(
            "Gr(4,11)", 24, "3 ζ(2)", "-11 ζ(3)", "15/4 ζ(4)", "3 ζ(4)", "-33/2 ζ(2)ζ(3) - 11/2 ζ(5)",
            "121/2 ζ(3)^2 + 477/16 ζ(6)", "121/2 ζ(3)^2 + 83/16 ζ(6)", "27/16 ζ(6)", slow=True,
        ),
        _r("Gr(5,10)", 20, "0_2", "-10 ζ(3)", "-6 ζ(4)", "0_4", "10 ζ(5)", "-10 ζ(5)", slow=True),
        _r(
            "Gr(5,11)", 32, "ζ(2)", "-11 ζ(3)", "-21/4 ζ(4)", "ζ(4)", "-11 ζ(2)ζ(3) + 11 ζ(5)", "-11 ζ(5)",
            slow=True,
        ),
    ],
    "B": [
        _r("B(3,2)", 2, "-2 ζ(2)"),
        _r("B(4,2)", 3, "ζ(2)", "-41/2 ζ(4)"),
        _r("B(4,3)", 3, "-4 ζ(2)", "-4 ζ(3)"),
        _r("B(4,4)", 2, "2 ζ(3)"),
        _r("B(5,2)", 4, "3 ζ(2)", "3/2 ζ(4)", "-1191/8 ζ(6)"),
        _r(
            "B(5,3)", 8, "0_2", "-8 ζ(3)", "-24 ζ(4)", "20 ζ(5)", "64/3 ζ(3)^2 + 80/3 ζ(6)",
            "32 ζ(3)ζ(4) + 232/3 ζ(7)", "256/21 ζ(3)^3 + 320/7 ζ(3)ζ(6) - 480/7 ζ(4)ζ(5) - 1000/21 ζ(9)",
        ),
        _r(
            "B(5,4)", 8, "-6 ζ(2)", "-6 ζ(3)", "-45 ζ(4)", "9 ζ(2)ζ(3) + 21 ζ(5)", "15 ζ(3)^2 + 1141/24 ζ(6)",
            "56 ζ(2)ζ(5) + 30 ζ(3)ζ(4) + 52 ζ(7)",
            "266/5 ζ(3)^3 - 171/5 ζ(2)ζ(7) - 222/5 ζ(3)ζ(6) - 263/5 ζ(4)ζ(5) + 136/5 ζ(9)",
        ),
        _r("B(5,5)", 3, "4 ζ(3)", "20 ζ(5)"),
        _r("B(6,2)", 5, "5 ζ(2)", "87/4 ζ(4)", "-485/8 ζ(6)", "-35073/32 ζ(8)"),
        _r(
            "B(6,3)", 12, "2 ζ(2)", "-6 ζ(3)", "-12 ζ(4)", "-12 ζ(2)ζ(3) + 18 ζ(5)", "-36 ζ(3)^2 - 146 ζ(6)",
            "36 ζ(3)^2 + 2 ζ(6)", "24 ζ(2)ζ(5) + 24 ζ(3)ζ(4) + 76 ζ(7)",
            "360/11 ζ(2)ζ(3)^2 - 1080/11 ζ(3)ζ(5) + 1176/11 ζ(8)",
            "803 ζ(3)^3 - 528 ζ(2)ζ(7) + 318 ζ(3)ζ(6) - 244 ζ(4)ζ(5) - 35 ζ(9)",
            "75 ζ(3)^3 - 336 ζ(2)ζ(7) - 395 ζ(3)ζ(6) - 22 ζ(4)ζ(5) - 70 ζ(9)", slow=True,
        ),
        _r(
            "B(6,4)", 18, "-ζ(2)", "-10 ζ(3)", "-17/4 ζ(4)", "-14 ζ(4)", "5 ζ(2)ζ(3) + 19 ζ(5)",
            "50 ζ(3)^2 + 317 ζ(6)", "-50 ζ(3)^2 - 4135/8 ζ(6)", slow=True,
        ),
        _r(
            "B(6,5)", 14, "-8 ζ(2)", "-8 ζ(3)", "-84 ζ(4)", "64 ζ(2)ζ(3) + 16 ζ(5)", "-64 ζ(2)ζ(3)",
            "80/3 ζ(3)^2 + 24 ζ(6)", "110 ζ(2)ζ(5) + 49/2 ζ(3)ζ(4) + 101/2 ζ(7)", slow=True,
        ),
        _r("B(6,6)", 5, "6 ζ(3)", "18 ζ(5)", "-18 ζ(3)^2 - 60 ζ(6)", "36 ζ(3)^3 + 360 ζ(3)ζ(6) + 332 ζ(9)"),
        _r(
            "B(7,2)", 6, "7 ζ(2)", "211/4 ζ(4)", "1733/8 ζ(6)", "-76699/96 ζ(8)", "-5368203/640 ζ(10)",
            slow=True,
        ),
        _r(
            "B(7,7)", 8, "8 ζ(3)", "16 ζ(5)", "-30 ζ(3)^2 - 60 ζ(6)", "-112 ζ(7)",
            "256/3 ζ(3)^3 + 480 ζ(3)ζ(6) + 992/3 ζ(9)", slow=True,
        ),
    ],
    "C": [
        _r("C(3,2)", 2, "2 ζ(2)"),
        _r("C(3,3)", 2, "7/2 ζ(3)"),
        _r("C(4,2)", 3, "4 ζ(2)", "16 ζ(4)"),
        _r("C(4,3)", 4, "ζ(2)", "-9 ζ(3)", "-9/2 ζ(2)ζ(3) - 9/2 ζ(5)"),
        _r("C(4,4)", 2, "4 ζ(3)"),
        _r("C(5,2)", 4, "6 ζ(2)", "42 ζ(4)", "108 ζ(6)"),
        _r(
            "C(5,3)", 8, "3 ζ(2)", "-11 ζ(3)", "27/4 ζ(4)", "-33/2 ζ(2)ζ(3) - 11/2 ζ(5)",
            "242/3 ζ(3)^2 + 2383/48 ζ(6)", "-11 ζ(2)ζ(5) - 99/4 ζ(3)ζ(4) - 11/3 ζ(7)",
            "108 ζ(3)^3 - 38 ζ(2)ζ(7) + 309/4 ζ(3)ζ(6) - 41/4 ζ(4)ζ(5) + 36 ζ(9)",
        ),
        _r(
            "C(5,4)", 8, "0_2", "-10 ζ(3)", "30 ζ(4)", "-5 ζ(5)", "250/3 ζ(3)^2 + 175/3 ζ(6)",
            "-100/3 ζ(3)ζ(4) - 10/9 ζ(7)", "2500/21 ζ(3)^3 + 250 ζ(3)ζ(6) - 150/7 ζ(4)ζ(5) - 10/21 ζ(9)",
        ),
        _r("C(5,5)", 3, "9/2 ζ(3)", "-21/2 ζ(5)"),
        _r("C(6,2)", 5, "8 ζ(2)", "78 ζ(4)", "328 ζ(6)", "768 ζ(8)"),
        _r(
            "C(6,3)", 12, "5 ζ(2)", "-13 ζ(3)", "111/4 ζ(4)", "-65/2 ζ(2)ζ(3) - 13/2 ζ(5)",
            "-169/2 ζ(3)^2 + 155/16 ζ(6)", "169/2 ζ(3)^2 + 65/2 ζ(6)", slow=True,
        ),
        _r("C(6,6)", 4, "ζ(3)", "-11 ζ(5)", "-25 ζ(3)^2 - 15/2 ζ(6)", "500/3 ζ(3)^3 + 150 ζ(3)ζ(6) - 131/3 ζ(9)"),
        _r("C(7,2)", 6, "10 ζ(2)", "124 ζ(4)", "695 ζ(6)", "7664/3 ζ(8)", "5760 ζ(10)", slow=True),
        _r(
            "C(7,7)", 8, "11/2 ζ(3)", "-23/2 ζ(5)", "-121/4 ζ(3)^2 - 15/2 ζ(6)", "71/2 ζ(7)",
            "1331/6 ζ(3)^3 + 165 ζ(3)ζ(6) - 263/6 ζ(9)", "781/12 ζ(3)ζ(7) - 529/12 ζ(5)^2 - 63/2 ζ(10)",
            slow=True,
        ),
    ],
    "D": [
        _r("D(4,2)", 4, "0", "0", "-24 ζ(4)"),
        _r("D(5,2)", 5, "2 ζ(2)", "0", "-12 ζ(4)", "-144 ζ(6)"),
        _r(
            "D(5,3)", 9, "-ζ(2)", "-ζ(2)", "-6 ζ(3)", "0_4", "-45/2 ζ(4)", "3 ζ(2)ζ(3) + 21 ζ(5)", "0_5",
            "12 ζ(3)^2 + 275/24 ζ(6)",
        ),
        _r("D(5,4)", 2, "2 ζ(3)"),
        _r("D(6,2)", 6, "4 ζ(2)", "10 ζ(4)", "10 ζ(4)", "-124 ζ(6)", "-960 ζ(8)"),
        _r(
            "D(6,3)", 14, "ζ(2)", "-5 ζ(3)", "-5 ζ(3)", "-41/2 ζ(4)", "0", "-5 ζ(2)ζ(3) + 19 ζ(5)",
            "25/2 ζ(3)^2 + 953/16 ζ(6)", "25/2 ζ(3)^2 - 937/16 ζ(6)", "0",
        ),
        _r("D(6,5)", 3, "4 ζ(3)", "20 ζ(5)"),
        _r("D(7,2)", 7, "6 ζ(2)", "36 ζ(4)", "0", "50 ζ(6)", "-1072 ζ(8)", "-6912 ζ(10)"),
        _r("D(7,6)", 5, "6 ζ(3)", "18 ζ(5)", "-18 ζ(3)^2 - 60 ζ(6)", "36 ζ(3)^3 + 360 ζ(3)ζ(6) + 332 ζ(9)"),
    ],
    "EFG": [
        _r("E(6,6)", 3, "6 ζ(4)", "0_8"),
        _r("E(6,2)", 6, "0_3", "18 ζ(4)", "90 ζ(6)", "0_7", "-3456 ζ(10)"),
        _r("E(7,7)", 3, "-24 ζ(5)", "168 ζ(9)"),
        _r(
            "E(8,8)", 11, "120 ζ(6)", "-1512 ζ(10)", slow=True,
            note="source row lists 7 constants, inconsistent with mu = 11",
        ),
        _r("F(4,1)", 2, "21 ζ(4)"),
        _r(
            "F(4,3)", 8, "-4 ζ(2)", "0_3", "-2 ζ(4)", "-24 ζ(5)", "-246 ζ(6)", "32 ζ(2)ζ(5) + 60 ζ(7)",
            "2160 ζ(2)ζ(7) - 144 ζ(4)ζ(5)",
        ),
        _r("F(4,4)", 2, "6 ζ(4)"),
    ],
    "products": [
        _r("P2xP2", 3, "0_1", "6 ζ(2)", terms=300),
        _r("P2xP3", 3, "0_1", "14/3 ζ(2)", terms=1200),
        _r("P2xP3:O(1,1)", 3, "-C", "1/2 C^2 + 7/2 ζ(2)", terms=300),
    ],
}


@dataclass(frozen=True)
class Expected:
    text: str
    weight: int | None  # None: unknown (bare zero)
    zero: bool
    sign_free: bool
    polynomial: object = field(default=None, compare=False)


def parse_entry(text: str) -> Expected:
    from .zetaid import parse_paper_style

    t = text.strip()
    if t == "0":
        return Expected(t, None, True, False)
    if t.startswith("0_"):
        return Expected(t, int(t[2:]), True, False)
    sign_free = t.startswith("±")
    body = t.lstrip("±")
    w = _weight_of(body)
    return Expected(t, w, False, sign_free, parse_paper_style(body, w))


def _weight_of(body: str) -> int:
    from .zetaid import _FACTOR, _TERM

    for _, _, mono in _TERM.findall(body):
        return sum((int(a) if a else 1) * (int(e) if e else 1) for _, a, e in _FACTOR.findall(mono))
    raise ValueError(f"cannot read weight of {body!r}")
