"""Finite presentations and their versioned text file format.

A presentation lists generators with degrees and relations as formal sums of
(morphism, generator) pairs sharing one target degree.  The file format:

    catrep-presentation v1
    category oi
    group none
    field q
    horizon 6
    gen u deg 1
    rel 2: 1*1->2:[2]@u + -1*1->2:[1]@u

Morphisms use the category encoding r->s:[i1,...,ir](g1,...,gr), labels
omitted for FI/OI.  Header lines other than the magic line are optional in
files driven from the CLI (flags supply the missing values); emitted
normalized files always carry the full header.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import CategoryDescriptor, make_category, parse_morphism
from .fields import parse_field
from .matrices import Mat
from .trunc import FreeModule, module_closure_of_rows, quotient_by, submodule_from_rows

FORMAT_MAGIC = "catrep-presentation v1"


class PresentationError(Exception):
    """Parse or validation failure, carrying line/column diagnostics."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}" if line else message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Relation:
    target: int
    terms: tuple  # (coeff, Morphism, generator index)


@dataclass(frozen=True)
class Presentation:
    generators: tuple  # (name, degree)
    relations: tuple  # Relation

    def validate(self, cat: CategoryDescriptor) -> None:
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        for _, d in self.generators:
            if d < 0:
                raise PresentationError("negative generator degree")
        for rel in self.relations:
            for _, alpha, k in rel.terms:
                if not (0 <= k < len(self.generators)):
                    raise PresentationError("relation references unknown generator")
                if alpha.src != self.generators[k][1]:
                    raise PresentationError(
                        f"morphism {alpha} does not start at generator degree "
                        f"{self.generators[k][1]}"
                    )
                if alpha.dst != rel.target:
                    raise PresentationError(
                        f"term {alpha} does not land in the relation degree {rel.target}"
                    )
                cat.validate(alpha)


def normalize_presentation(cat: CategoryDescriptor, pres: Presentation) -> Presentation:
    """Normalize every relation morphism for the category (empty labels)."""
    rels = []
    for rel in pres.relations:
        terms = tuple((c, cat.normalize(alpha), k) for c, alpha, k in rel.terms)
        rels.append(Relation(rel.target, terms))
    return Presentation(pres.generators, tuple(rels))


def from_presentation(cat: CategoryDescriptor, field, pres: Presentation, horizon: int):
    """Cokernel of the relation submodule inside the covering free module.

    Returns (module, projection from the free module).  The relation
    submodule is the action closure of the relation rows, computed one
    degree at a time.
    """
    pres = normalize_presentation(cat, pres)
    pres.validate(cat)
    for rel in pres.relations:
        if rel.target > horizon:
            raise PresentationError(
                f"relation degree {rel.target} above horizon {horizon}"
            )
    F = FreeModule(cat, field, tuple(d for _, d in pres.generators), horizon)
    seeds = {}
    by_degree = {}
    for rel in pres.relations:
        by_degree.setdefault(rel.target, []).append(rel)
    for t, rels in by_degree.items():
        rows = []
        for rel in rels:
            row = [field.zero()] * F.dims[t]
            for coeff, alpha, k in rel.terms:
                idx = F.basis_index(t, k, alpha)
                row[idx] = field.add(row[idx], coeff)
            rows.append(row)
        seeds[t] = Mat.from_rows(field, rows, F.dims[t])
    closure = module_closure_of_rows(F, seeds)
    _, incl = submodule_from_rows(F, closure)
    module, proj = quotient_by(incl)
    return module, proj


# -- text format ------------------------------------------------------


def parse_presentation_text(text: str):
    """Parse a presentation file; returns (header dict, Presentation).

    The header dict may contain 'category', 'group', 'field', 'horizon';
    only the magic line is mandatory.
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_MAGIC:
        raise PresentationError(f"missing magic line {FORMAT_MAGIC!r}", 1, 1)
    header = {}
    generators = []
    gen_index = {}
    relations = []
    pending_relations = []  # parsed after generators are known
    for ln, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("category "):
            header["category"] = line.split(None, 1)[1].strip()
        elif line.startswith("group "):
            header["group"] = line.split(None, 1)[1].strip().replace(" ", ":")
        elif line.startswith("field "):
            header["field"] = line.split(None, 1)[1].strip()
        elif line.startswith("horizon "):
            try:
                header["horizon"] = int(line.split(None, 1)[1])
            except ValueError:
                raise PresentationError("bad horizon value", ln, len("horizon ") + 1)
        elif line.startswith("gen "):
            parts = line.split()
            if len(parts) != 4 or parts[2] != "deg":
                raise PresentationError("expected 'gen <name> deg <d>'", ln, 1)
            name = parts[1]
            if name in gen_index:
                raise PresentationError(f"duplicate generator {name!r}", ln, 5)
            try:
                deg = int(parts[3])
            except ValueError:
                raise PresentationError("bad generator degree", ln, line.find(parts[3]) + 1)
            gen_index[name] = len(generators)
            generators.append((name, deg))
        elif line.startswith("rel "):
            pending_relations.append((ln, line))
        else:
            raise PresentationError(f"unrecognized line {line!r}", ln, 1)
    for ln, line in pending_relations:
        relations.append(_parse_relation(line, ln, gen_index))
    return header, Presentation(tuple(generators), tuple(relations))


def _parse_relation(line: str, ln: int, gen_index: dict) -> Relation:
    body = line[4:]
    if ":" not in body:
        raise PresentationError("expected 'rel <degree>: <terms>'", ln, 5)
    head, terms_text = body.split(":", 1)
    try:
        target = int(head.strip())
    except ValueError:
        raise PresentationError("bad relation degree", ln, 5)
    terms = []
    for chunk in _split_terms(terms_text):
        col = line.find(chunk) + 1
        if "*" not in chunk or "@" not in chunk:
            raise PresentationError(
                "expected '<coeff>*<morphism>@<gen>'", ln, col
            )
        coeff_text, rest = chunk.split("*", 1)
        mor_text, gen_name = rest.rsplit("@", 1)
        gen_name = gen_name.strip()
        if gen_name not in gen_index:
            raise PresentationError(f"unknown generator {gen_name!r}", ln, col)
        try:
            alpha = parse_morphism(mor_text.strip())
        except ValueError as exc:
            raise PresentationError(str(exc), ln, col)
        terms.append((coeff_text.strip(), alpha, gen_index[gen_name]))
    if not terms:
        raise PresentationError("empty relation", ln, 5)
    return Relation(target, tuple(terms))


def _split_terms(text: str):
    """Split on '+' separators that sit between terms (not inside signs)."""
    out = []
    for piece in text.split(" + "):
        piece = piece.strip()
        if piece:
            out.append(piece)
    return out


def resolve_coefficients(pres: Presentation, field) -> Presentation:
    """Parse textual coefficients into field elements (idempotent)."""
    rels = []
    for rel in pres.relations:
        terms = []
        for coeff, alpha, k in rel.terms:
            value = field.parse(coeff) if isinstance(coeff, str) else coeff
            terms.append((value, alpha, k))
        rels.append(Relation(rel.target, tuple(terms)))
    return Presentation(pres.generators, tuple(rels))


def emit_presentation_text(cat: CategoryDescriptor, field, horizon: int,
                           pres: Presentation) -> str:
    """Serialize with a full header; output re-parses to an identical module."""
    lines = [FORMAT_MAGIC]
    lines.append(f"category {cat.kind}")
    lines.append(f"group {cat.group.spec if cat.group else 'none'}")
    lines.append(f"field {field.name}")
    lines.append(f"horizon {horizon}")
    for name, deg in pres.generators:
        lines.append(f"gen {name} deg {deg}")
    for rel in pres.relations:
        terms = []
        for coeff, alpha, k in rel.terms:
            coeff_text = coeff if isinstance(coeff, str) else field.format(coeff)
            terms.append(f"{coeff_text}*{alpha.encode()}@{pres.generators[k][0]}")
        lines.append(f"rel {rel.target}: " + " + ".join(terms))
    return "\n".join(lines) + "\n"


def load_presentation(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_presentation_text(fh.read())


def build_module(header: dict, pres: Presentation, cat=None, field=None, horizon=None):
    """Instantiate (cat, field, horizon, module, projection) from file + overrides."""
    if cat is None:
        kind = header.get("category")
        if kind is None:
            raise PresentationError("category missing from both file and flags")
        group = header.get("group", "none")
        cat = make_category(kind, None if group == "none" else group)
    if field is None:
        spec = header.get("field")
        if spec is None:
            raise PresentationError("field missing from both file and flags")
        field = parse_field(spec)
    if horizon is None:
        horizon = header.get("horizon")
        if horizon is None:
            raise PresentationError("horizon missing from both file and flags")
    if horizon < 0:
        raise PresentationError(f"horizon must be >= 0, got {horizon}")
    pres = resolve_coefficients(pres, field)
    module, proj = from_presentation(cat, field, pres, horizon)
    return cat, field, horizon, module, proj
