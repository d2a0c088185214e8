"""The presentation of the rational Chow ring of stable genus 3 curves.

Generators are l1, l2, l3 (lambda classes), H (hyperelliptic locus), d1,
d11 and d111 (boundary strata), of weights 1, 2, 3, 1, 1, 2, 3.  The fifteen
relations live in the bundled data file ``data/relations.txt``; readings of
the printed text that cannot be taken literally are stored there as named
variants, and :func:`resolve_variants` decides between them by search.

Three generators are redundant after inverting 2, 3 and 7: the relations
named A2, d1c and A3 are linear in l2, d111 and l3 with constant
coefficients.  :func:`rational_simplify` removes them and counts minimal
relations of the remaining four-generator ideal.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from .gradedpoly import (
    GradedPoly,
    ParseError,
    RingMap,
    VariableTable,
    parse,
    prime_factors,
    substitute,
)
from .faber import build_maps, faber_ideal
from .ideals import hilbert_function, ideal_equal, minimal_generators, minimal_generators_by_degree
from .report import FAIL, PASS, VerificationReport

DATA_FILE = Path(__file__).with_name("data") / "relations.txt"
FORMAT = "chowm3-relations 1"

GENERATORS = VariableTable.of("l1 l2:2 l3:3 H d1 d11:2 d111:3")
SIMPLIFIED = VariableTable.of("l1 H d1 d11:2")
OPEN_STRATUM = VariableTable.of("l1 l2:2 l3:3")

EXPECTED_PROFILE = {2: 1, 3: 5, 4: 8, 5: 1}
ELIMINATIONS = (("A2", "l2"), ("d1c", "d111"), ("A3", "l3"))
EXPECTED_MINIMAL_TOTAL = 9
MISSING_OPERATOR = "??"


class ChecksumMismatch(ValueError):
    pass


class UnresolvedPresentation(RuntimeError):
    """No variant assignment satisfies the consistency constraints."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class NotEliminable(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """One named relation with its literal reading and its variants.

    ``literal`` is None when the printed text does not parse.  ``poly`` is
    the reading currently in use (None until a choice is made).
    """

    name: str
    label: str
    degree: int
    anchor: str
    literal_text: str
    literal: GradedPoly = None
    variants: tuple = ()  # (variant id, GradedPoly)
    default: str = "literal"
    poly: GradedPoly = None
    choice: str = None
    texts: tuple = ()  # (reading id, source text)

    @property
    def flagged(self) -> bool:
        return bool(self.variants)

    def options(self) -> list:
        """Candidate readings as (id, poly), the literal first when it parses."""
        out = [("literal", self.literal)] if self.literal is not None else []
        return out + list(self.variants)

    def reading(self, choice: str) -> GradedPoly:
        for vid, poly in self.options():
            if vid == choice:
                return poly
        raise KeyError(f"{self.name} has no reading {choice!r}")


@dataclass(frozen=True)
class Presentation:
    table: VariableTable
    relations: tuple
    checksum: str = ""
    aliases: tuple = ()  # (printed name, generator name)
    steps: tuple = ()

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def names(self) -> list:
        return [r.name for r in self.relations]

    def polys(self) -> list:
        missing = [r.name for r in self.relations if r.poly is None]
        if missing:
            raise UnresolvedPresentation(f"no reading chosen for {missing}", None)
        return [r.poly for r in self.relations]

    def assignment(self) -> dict:
        return {r.name: r.choice for r in self.relations if r.flagged}

    def assignment_id(self) -> str:
        return format_assignment(self.assignment())


@dataclass(frozen=True)
class EliminationStep:
    relation: str
    variable: str
    substitution: GradedPoly
    coefficient: Fraction
    primes: frozenset


def format_assignment(assignment: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in sorted(assignment.items()))


def parse_assignment(text: str) -> dict:
    out = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in part:
            raise ValueError(f"bad assignment item {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        out[k] = v
    return out


# ---------------------------------------------------------------- loading


def data_checksum(text: str) -> str:
    body = "".join(l for l in text.splitlines(keepends=True) if not l.startswith("checksum "))
    return hashlib.sha256(body.encode()).hexdigest()


def _records(text):
    header, records, current = {}, [], None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("checksum "):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = {"name": line[1:-1], "variants": []}
            records.append(current)
        elif current is None:
            key, _, rest = line.partition(" ")
            header.setdefault(key, []).append(rest.strip())
        elif line.startswith("variant "):
            current["variants"].append(line[len("variant "):])
        else:
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError(f"malformed line {raw!r}")
            current[key.strip()] = value.strip()
    return header, records


def _variant(spec, literal_text):
    vid, sep, rest = spec.partition("=")
    if sep and "~" not in vid:
        return vid.strip(), rest.strip()
    vid, sep, rest = spec.partition("~")
    old, arrow, new = rest.partition("=>")
    if not sep or not arrow:
        raise ParseError(f"malformed variant {spec!r}")
    old, new = old.strip(), new.strip()
    if literal_text.count(old) != 1:
        raise ParseError(f"variant {vid.strip()!r}: {old!r} must occur exactly once")
    return vid.strip(), literal_text.replace(old, new)


def load_presentation(path=None) -> Presentation:
    """Read the relation data file, check its checksum and parse every reading.

    Relations whose literal text parses to a single reading get that reading
    as ``poly``; flagged relations get their declared default.
    """
    path = Path(path) if path else DATA_FILE
    text = path.read_text()
    sums = [l.split() for l in text.splitlines() if l.startswith("checksum ")]
    if len(sums) != 1 or len(sums[0]) != 3 or sums[0][1] != "sha256":
        raise ChecksumMismatch("missing or malformed checksum line")
    digest = data_checksum(text)
    if sums[0][2] != digest:
        raise ChecksumMismatch(f"checksum {sums[0][2]} does not match content {digest}")
    header, records = _records(text)
    if header.get("format") != [FORMAT]:
        raise ParseError(f"unsupported format {header.get('format')}")
    table = VariableTable.of(header["generators"][0])
    aliases = tuple(tuple(a.split()) for a in header.get("alias", ()))
    # printed names get weight 1 here; they are renamed before degrees matter
    reading_table = VariableTable.of(list(table.names) + [a for a, _ in aliases])
    rename = RingMap.build(
        reading_table, table, {**{n: n for n in table.names}, **dict(aliases)}
    )

    def read(s):
        if MISSING_OPERATOR in s:
            return None
        return substitute(parse(s, reading_table), rename)

    relations = []
    for rec in records:
        literal_text = rec["literal"]
        texts = tuple(_variant(v, literal_text) for v in rec["variants"])
        variants = tuple((vid, read(body)) for vid, body in texts)
        rel = Relation(
            name=rec["name"],
            label=rec.get("label", rec["name"]),
            degree=int(rec["degree"]),
            anchor=rec.get("anchor", ""),
            literal_text=literal_text,
            literal=read(literal_text),
            variants=variants,
            default=rec.get("default", "literal"),
            texts=(("literal", literal_text),) + texts,
        )
        choice = rel.default if rel.flagged else "literal"
        relations.append(replace(rel, poly=rel.reading(choice), choice=choice))
    return Presentation(table, tuple(relations), digest, aliases)


def with_assignment(p: Presentation, assignment: dict) -> Presentation:
    """Presentation with the given readings of flagged relations."""
    unknown = set(assignment) - {r.name for r in p.relations if r.flagged}
    if unknown:
        raise KeyError(f"not flagged relations: {sorted(unknown)}")
    rels = []
    for r in p.relations:
        if r.name in assignment:
            choice = assignment[r.name]
            r = replace(r, poly=r.reading(choice), choice=choice)
        rels.append(r)
    return replace(p, relations=tuple(rels))


# ---------------------------------------------------------------- degree audit


def _homogeneity(poly: GradedPoly, expected: int, table: VariableTable) -> dict:
    if poly is None:
        return {"status": "unparseable"}
    off = sorted(
        (m for m, _ in poly.items() if table.degree(m) != expected), key=str
    )
    if not off:
        return {"status": "homogeneous", "degree": expected}
    fmt = [str(GradedPoly.monomial(table, m)) for m in off]
    return {"status": "inhomogeneous", "offending": fmt, "degrees": sorted(poly.degrees())}


def alias_forcing(p: Presentation) -> dict:
    """For each printed alias, the generators that keep its relations homogeneous.

    Every relation mentioning a printed name is re-read with that name sent
    to each boundary generator in turn (the literal when it parses, else all
    variants).  The alias is forced when only the declared generator gives
    the expected degree everywhere.
    """
    printed = [a for a, _ in p.aliases]
    reading_table = VariableTable.of(list(p.table.names) + printed)
    candidates = [n for n in p.table.names if n.startswith("d")]
    out = {}
    for alias, target in p.aliases:
        ok = []
        for cand in candidates:
            images = {n: n for n in p.table.names}
            images.update(dict(p.aliases))
            images[alias] = cand
            m = RingMap.build(reading_table, p.table, images)
            good = True
            for r in p.relations:
                texts = [t for _, t in r.texts]
                if not any(alias in _identifiers(t) for t in texts):
                    continue
                if MISSING_OPERATOR not in r.literal_text:
                    texts = [r.literal_text]
                for t in texts:
                    if MISSING_OPERATOR in t:
                        continue
                    if substitute(parse(t, reading_table), m).degrees() != {r.degree}:
                        good = False
            if good:
                ok.append(cand)
        out[alias] = {"declared": target, "consistent": ok, "forced": ok == [target]}
    return out


def _identifiers(text):
    word, out = "", set()
    for ch in text + " ":
        if ch.isalnum() or ch == "_":
            word += ch
        else:
            if word and not word[0].isdigit():
                out.add(word)
            word = ""
    return out


def audit_degrees(p: Presentation) -> VerificationReport:
    """Homogeneity of every literal and of every reading in use.

    Passes when the readings in use are homogeneous of their expected degrees
    with the expected degree profile.  Inhomogeneous or unparseable literals
    are listed in the witness either way.
    """
    literal, current, profile = {}, {}, {}
    ok = True
    for r in p.relations:
        literal[r.name] = _homogeneity(r.literal, r.degree, p.table)
        cur = _homogeneity(r.poly, r.degree, p.table)
        current[r.name] = {"reading": r.choice, **cur}
        if cur["status"] != "homogeneous":
            ok = False
        else:
            profile[r.degree] = profile.get(r.degree, 0) + 1
    flagged = sorted(
        n for n, w in literal.items() if w["status"] != "homogeneous"
    )
    ok = ok and profile == EXPECTED_PROFILE and len(p.relations) == 15
    return VerificationReport(
        check="degree_audit",
        module="m3bar",
        anchor="fifteen homogeneous relations of degrees 2, 3, 4, 5",
        status=PASS if ok else FAIL,
        witness={
            "profile": profile,
            "expected_profile": EXPECTED_PROFILE,
            "literal_flagged": flagged,
            "literal": literal,
            "in_use": current,
            "checksum": p.checksum,
        },
    )


# ---------------------------------------------------------------- elimination


def eliminate_generator(p: Presentation, relation: str, variable: str):
    """Solve ``relation`` for ``variable`` and substitute everywhere else.

    Returns the smaller presentation and the step taken.  The relation must
    read c*variable + rest with c a nonzero constant and rest free of it.
    """
    rel = p.relation(relation)
    if rel.poly is None:
        raise UnresolvedPresentation(f"no reading chosen for {relation}", None)
    if variable not in p.table.names:
        raise NotEliminable(f"{variable} is not a generator")
    parts = rel.poly.coefficients_in(variable)
    if set(parts) - {0, 1} or 1 not in parts:
        raise NotEliminable(f"{relation} is not linear in {variable}")
    lead = parts[1]
    if lead.variables() or lead.is_zero():
        raise NotEliminable(f"coefficient of {variable} in {relation} is not a constant")
    c = lead.coefficient(lead.table.unit())
    rest = parts.get(0, GradedPoly.zero(rel.poly.table))
    keep = [i for i, n in enumerate(p.table.names) if n != variable]
    table = VariableTable(
        tuple(p.table.names[i] for i in keep), tuple(p.table.weights[i] for i in keep)
    )
    value = (rest * Fraction(-1) / c).restrict_table(table)
    images = {n: n for n in table.names}
    images[variable] = value
    m = RingMap.build(p.table, table, images)
    rels = []
    for r in p.relations:
        if r.name == relation:
            continue
        rels.append(replace(r, poly=substitute(r.poly, m)))
    step = EliminationStep(
        relation=relation,
        variable=variable,
        substitution=value,
        coefficient=c,
        primes=frozenset(prime_factors(c.numerator)),
    )
    return replace(p, table=table, relations=tuple(rels), steps=p.steps + (step,)), step


def check_step(before: Presentation, step: EliminationStep) -> bool:
    """The substitution sends the relation it came from to zero."""
    images = {n: n for n in before.table.names}
    images[step.variable] = step.substitution.change_table(before.table)
    m = RingMap.build(before.table, before.table, images)
    return substitute(before.relation(step.relation).poly, m).is_zero()


@dataclass(frozen=True)
class SimplifiedIdeal:
    table: VariableTable
    relations: tuple  # (name, GradedPoly), all surviving relations
    steps: tuple
    counts: dict  # minimal generators by degree
    minimal: tuple  # names of a minimal generating subset
    hilbert: tuple
    maxdeg: int = 6

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def polys(self) -> list:
        return [q for _, q in self.relations]

    def minimal_polys(self) -> list:
        keep = set(self.minimal)
        return [q for n, q in self.relations if n in keep]


def rational_simplify(p: Presentation, eliminations=ELIMINATIONS, maxdeg: int = 6) -> SimplifiedIdeal:
    """Eliminate l2, d111 and l3 and count minimal relations of what is left."""
    q = p
    for rel, var in eliminations:
        q, _ = eliminate_generator(q, rel, var)
    rels = [(r.name, r.poly) for r in q.relations if not r.poly.is_zero()]
    polys = [x for _, x in rels]
    counts = minimal_generators_by_degree(polys, maxdeg)
    chosen = minimal_generators(polys, maxdeg)
    names = []
    for g in chosen:
        for n, x in rels:
            if x is g and n not in names:
                names.append(n)
                break
    return SimplifiedIdeal(
        table=q.table,
        relations=tuple(rels),
        steps=q.steps,
        counts=counts,
        minimal=tuple(names),
        hilbert=tuple(hilbert_function(polys, maxdeg, q.table)),
        maxdeg=maxdeg,
    )


def pull_back(s: SimplifiedIdeal, p: Presentation) -> list:
    """Minimal simplified relations together with the eliminating relations, over all generators."""
    out = [x.restrict_table(p.table) for x in s.minimal_polys()]
    for step in s.steps:
        out.append(p.relation(step.relation).poly)
    return out


def same_ideal_after_elimination(p: Presentation, s: SimplifiedIdeal) -> bool:
    return ideal_equal(p.polys(), pull_back(s, p))


def restrict_open_stratum(relation) -> GradedPoly:
    """Set H and every boundary class to zero; result in l1, l2, l3."""
    poly = relation.poly if isinstance(relation, Relation) else relation
    images = {"l1": "l1", "l2": "l2", "l3": "l3", "H": 0, "d1": 0, "d11": 0, "d111": 0}
    return substitute(poly, RingMap.build(GENERATORS, OPEN_STRATUM, images))


# ---------------------------------------------------------------- variant search


@dataclass(frozen=True)
class VariantOutcome:
    assignment: dict
    homogeneous: bool
    minimal_total: int = None
    minimal_counts: dict = None
    faber_counts: dict = None

    @property
    def consistent(self) -> bool:
        return (
            self.homogeneous
            and self.minimal_total == EXPECTED_MINIMAL_TOTAL
            and self.faber_counts == FABER_COUNTS
        )

    def to_record(self) -> dict:
        return {
            "assignment": format_assignment(self.assignment),
            "homogeneous": self.homogeneous,
            "minimal_total": self.minimal_total,
            "minimal_counts": self.minimal_counts,
            "faber_counts": self.faber_counts,
            "consistent": self.consistent,
        }


FABER_COUNTS = {3: 3, 4: 6}


def variant_assignments(p: Presentation) -> list:
    """Every assignment of readings to flagged relations, in lexicographic order."""
    flagged = [r for r in p.relations if r.flagged]
    names = [r.name for r in flagged]
    choices = [[vid for vid, _ in r.options()] for r in flagged]
    return [dict(zip(names, combo)) for combo in itertools.product(*choices)]


def search_variants(p: Presentation, maxdeg: int = 6) -> list:
    """Evaluate every assignment against homogeneity, the nine-relation count and the Faber profile."""
    maps = build_maps()
    seen = {}
    out = []
    for assignment in variant_assignments(p):
        q = with_assignment(p, assignment)
        homogeneous = all(
            _homogeneity(r.poly, r.degree, q.table)["status"] == "homogeneous"
            for r in q.relations
        )
        if not homogeneous:
            out.append(VariantOutcome(assignment, False))
            continue
        key = tuple(q.polys())
        if key not in seen:
            s = rational_simplify(q, maxdeg=maxdeg)
            _, fcounts = faber_ideal(s, maps)
            seen[key] = (s.total, s.counts, fcounts)
        total, counts, fcounts = seen[key]
        out.append(VariantOutcome(assignment, True, total, counts, fcounts))
    return out


def resolve_variants(p: Presentation, maxdeg: int = 6):
    """Pick the reading of every flagged relation by constrained search.

    Returns the presentation under the first surviving assignment and a
    report listing every assignment with its outcome.  Raises
    UnresolvedPresentation (carrying the report) when none survives.
    """
    outcomes = search_variants(p, maxdeg)
    survivors = [o for o in outcomes if o.consistent]
    homogeneous = [o for o in outcomes if o.homogeneous]
    flags = {
        r.name: {
            "literal": _homogeneity(r.literal, r.degree, p.table)["status"],
            "options": [vid for vid, _ in r.options()],
            "default": r.default,
        }
        for r in p.relations
        if r.flagged
    }
    report = VerificationReport(
        check="variant_search",
        module="m3bar",
        anchor="readings of the flagged relations consistent with the rational simplification",
        status=PASS if survivors else FAIL,
        witness={
            "flagged": flags,
            "aliases": {a: t for a, t in p.aliases},
            "assignments": [o.to_record() for o in outcomes],
            "homogeneous_assignments": len(homogeneous),
            "consistent_assignments": len(survivors),
            "checksum": p.checksum,
        },
    )
    if not survivors:
        raise UnresolvedPresentation(
            f"none of {len(outcomes)} assignments is consistent "
            f"({len(homogeneous)} are homogeneous)",
            report,
        )
    return with_assignment(p, survivors[0].assignment), report
