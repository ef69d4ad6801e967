"""Reference triple-intersection tables for {55,54,2;1,1,54}, transcribed by hand.

Each table is a function of its integer parameters returning the nonzero
entries; `points` expands it over the parameter box and keeps the
non-negative tables.
"""

from __future__ import annotations

import itertools

from drgtriples.triples import variables


def _expand(table, ranges, keep=None):
    names = sorted(ranges)
    out = set()
    for combo in itertools.product(*(ranges[n] for n in names)):
        r = dict(zip(names, combo))
        ent = table(r)
        vec = tuple(ent.get("".join(map(str, idx)), 0) for idx in variables(3))
        if min(vec) < 0:
            continue
        if keep is not None and not keep(dict(zip(variables(3), vec))):
            continue
        out.add(vec)
    return out


def _sym(ent, *pairs):
    for a, b in pairs:
        ent[b] = ent[a]
    return ent


# d(u,v)=2, d(u,w)=d(v,w)=1
def t211(r):
    r1 = r[1]
    return {
        "122": 52, "132": 2,
        "212": 52, "221": 53, "222": r1 + 2650, "223": -r1 + 108, "232": -r1 + 106, "233": r1,
        "312": 2, "322": -r1 + 106, "323": r1, "332": r1, "333": -r1 + 2,
    }


R211 = {1: range(0, 3)}


# d(u,v)=d(u,w)=2, d(v,w)=3, counting equations only
def t223_raw(r):
    r4, r5, r6, r7, r8, r9 = (r[k] for k in range(4, 10))
    return {
        "112": -r6 + 1, "113": r6, "121": -r4 - r8 + 54, "122": r7, "123": r4 - r7 + r8 - 2,
        "131": r4 + r8 - 53, "132": r6 - r7 + 51, "133": -r4 - r6 + r7 - r8 + 4,
        "212": r5 + r6 - r7 - r9 + 2808, "213": -r5 - r6 + r7 + r9 - 2756, "221": r4, "222": r9,
        "223": -r4 - r9 + 2811, "231": -r4 + 52, "232": -r5 - r6 + r7 + 3, "233": r4 + r5 + r6 - r7 + 50,
        "312": -r5 + r7 + r9 - 2755, "313": r5 - r7 - r9 + 2757, "321": r8, "322": -r7 - r9 + 2861,
        "323": r7 - r8 + r9 - 2755, "331": -r8 + 2, "332": r5, "333": -r5 + r8,
    }


R223_RAW = {4: range(51, 53), 5: range(0, 3), 6: range(0, 2), 7: range(49, 53), 8: range(0, 3),
            9: range(2705, 2711)}


# the narrowed (2,2,3) table. The printed [322] = 5 - 2 r6 breaks the
# counting equations (the u-sum over (2,2) falls short by 100); 105 - 2 r6
# is the value they force and is used here. PRINTED_322 keeps the original.
PRINTED_322 = 5


def t223_sym(r, c322=105):
    r6, r7 = r[6], r[7]
    ent = {
        "112": -r6 + 1, "113": r6, "122": r7, "123": r6 - r7 + 51, "133": -2 * r6 + r7 - 49,
        "212": 52, "213": 0, "222": 2 * r6 + 2756 - r7, "223": -2 * r6 + r7 + 3, "233": 2 * r6 - r7 + 102,
        "312": r6 + 1, "313": 1 - r6, "322": c322 - 2 * r6, "323": r6, "333": 1,
    }
    return _sym(ent, ("112", "121"), ("113", "131"), ("123", "132"), ("212", "221"), ("213", "231"),
                ("223", "232"), ("312", "321"), ("313", "331"), ("323", "332"))


R223_SYM = {6: range(0, 2), 7: range(49, 53)}


# d(u,v)=d(u,w)=2, d(v,w)=1, counting equations only. The printed table
# leaves out [112] = [121] = 1 (the common neighbour of u and v is w's
# neighbour too); the counting equations force them, so they are added here.
def t221_raw(r):
    r2, r3 = r[2], r[3]
    ent = {
        "112": 1, "121": 1,
        "122": r3, "123": -r3 + 51, "133": r3 - 49,
        "212": 51, "222": -r2 - r3 + 2705, "223": r2 + r3 + 55, "233": -r2 - r3 + 51,
        "312": 2, "322": r2 + 102, "323": -r2 + 2, "333": r2,
    }
    return _sym(ent, ("123", "132"), ("212", "221"), ("223", "232"), ("312", "321"), ("323", "332"))


R221_RAW = {2: range(0, 3), 3: range(49, 52)}

RESOLVED_221 = {
    "112": 1, "121": 1,
    "122": 51, "123": 0, "132": 0, "133": 2,
    "212": 51, "221": 51, "222": 2654, "223": 106, "232": 106, "233": 0,
    "312": 2, "321": 2, "322": 102, "323": 2, "332": 2, "333": 0,
}


# three vertices pairwise at distance 2, counting equations only
def t222_raw(r):
    r10, r11, r12, r13, r14, r15, r16, r17 = (r[k] for k in range(10, 18))
    return {
        "111": -r16 - r11 + 1, "112": r11, "113": r16, "121": r14, "122": -r12 - r14 + 52, "123": r12,
        "131": -r14 + r16 + r11, "132": r12 + r14 - r11, "133": -r12 - r16 + 2,
        "211": r15 + r16 - r17 + 50, "212": r17, "213": -r15 - r16 + 2,
        "221": -r15 - r16 + r17 - r10 + 2, "222": r12 - r13 + r16 - r17 + r10 + 2704,
        "223": -r12 + r13 + r15 + 104, "231": r10, "232": -r12 + r13 - r16 - r10 + 106,
        "233": r12 - r13 + r16,
        "311": -r15 + r17 + r11 - 50, "312": -r17 - r11 + 52, "313": r15,
        "321": -r14 + r15 + r16 - r17 + r10 + 50, "322": r13 + r14 - r16 + r17 - r10 + 54,
        "323": -r13 - r15 + 2, "331": r14 - r16 - r10 - r11 + 2, "332": -r13 - r14 + r16 + r10 + r11,
        "333": r13,
    }


R222_RAW = {10: range(0, 3), 11: range(0, 2), 12: range(0, 3), 13: range(0, 3), 14: range(0, 2),
            15: range(0, 3), 16: range(0, 2), 17: range(49, 53)}
R222_RULED = {**R222_RAW, 13: range(0, 1)}

# the two tables claimed when [213] = 2
BRANCH_222 = [
    {"111": 1, "122": 50, "123": 2, "132": 2,
     "212": 50, "213": 2, "231": 2, "221": 50, "222": 2658, "223": 102, "232": 102, "233": 2,
     "312": 2, "321": 2, "322": 102, "323": 2, "332": 2},
    {"112": 1, "121": 1, "122": 49, "123": 2, "132": 2,
     "211": 1, "212": 49, "221": 49, "213": 2, "231": 2, "222": 2659, "223": 102, "232": 102, "233": 2,
     "312": 2, "321": 2, "322": 102, "323": 2, "332": 2},
]

REFERENCE_P = {
    (1, 1, 1): 0, (1, 1, 2): 54, (1, 2, 2): 2808, (1, 2, 3): 108, (1, 3, 3): 2,
    (2, 1, 1): 1, (2, 1, 2): 52, (2, 1, 3): 2, (2, 2, 2): 2811, (2, 2, 3): 106, (2, 3, 3): 2,
    (3, 1, 2): 54, (3, 1, 3): 1, (3, 2, 2): 2862, (3, 2, 3): 54, (3, 3, 3): 54,
}

Q_MATRIX = [
    ["1", "1617", "110", "1408"],
    ["1", "1029/5", "-2", "-1024/5"],
    ["1", "-49/15", "-2", "64/15"],
    ["1", "-147/5", "54", "-128/5"],
]


def as_vector(entries: dict) -> tuple[int, ...]:
    return tuple(entries.get("".join(map(str, idx)), 0) for idx in variables(3))


def points(table, ranges, keep=None) -> set[tuple[int, ...]]:
    return _expand(table, ranges, keep)
