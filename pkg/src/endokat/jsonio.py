"""JSON encodings for every value that crosses the CLI boundary.

All documents carry ``format_version``; the schemas are described in
docs/formats.md.  Encoders emit canonical data (sorted keys are applied at
serialization time by the CLI) so identical inputs produce identical bytes.
"""

from __future__ import annotations

import json

from .dimension import SplitGroup
from .endogeny import Endogeny, EndogenySet, NegligibilityBound
from .errors import InvalidInput
from .groups import AbelianGroup, FinAbGroup, Subgroup
from .linearize import FieldReport

FORMAT_VERSION = "1"


def group_to_json(g: AbelianGroup) -> dict:
    return {"invariant_factors": list(g.moduli)}


def group_from_json(doc) -> FinAbGroup:
    try:
        return FinAbGroup(doc["invariant_factors"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed group document: {exc}") from exc


def subgroup_to_json(h: Subgroup) -> dict:
    return {"generators": [list(c) for c in h.gen_columns()]}


def subgroup_from_json(group: AbelianGroup, doc) -> Subgroup:
    try:
        gens = [tuple(v) for v in doc["generators"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed subgroup document: {exc}") from exc
    return Subgroup.from_generators(group, gens)


def endogeny_to_json(e: Endogeny) -> dict:
    r1 = e.source.rank
    pairs = []
    for col in e.graph.gen_columns():
        pairs.append([list(col[:r1]), list(col[r1:])])
    return {
        "source": group_to_json(e.source),
        "target": group_to_json(e.target),
        "graph_generators": pairs,
        "n_max": subgroup_to_json(e.bound.n_max),
    }


def endogeny_from_json(doc, ambient: AbelianGroup | None = None) -> Endogeny:
    try:
        src = ambient if ambient is not None else group_from_json(doc["source"])
        tgt = ambient if ambient is not None else group_from_json(doc["target"])
        pairs = [(tuple(a), tuple(b)) for a, b in doc["graph_generators"]]
        n_max = subgroup_from_json(tgt, doc["n_max"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed endogeny document: {exc}") from exc
    bound = NegligibilityBound(tgt, n_max)
    return Endogeny.from_pairs(src, tgt, pairs, bound)


def endogeny_set_to_json(s: EndogenySet) -> dict:
    return {
        "ambient": group_to_json(s.ambient),
        "n_max": subgroup_to_json(s.bound.n_max),
        "generators": [endogeny_to_json(e) for e in s.elements],
    }


def endogeny_set_from_json(doc, ambient: AbelianGroup | None = None) -> EndogenySet:
    try:
        amb = ambient if ambient is not None else group_from_json(doc["ambient"])
        n_max = subgroup_from_json(amb, doc["n_max"])
        bound = NegligibilityBound(amb, n_max)
        gens = [endogeny_from_json(d, ambient=amb) for d in doc["generators"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed endogeny set document: {exc}") from exc
    return EndogenySet(amb, bound, gens)


def split_group_to_json(sg: SplitGroup) -> dict:
    return {
        "p": sg.p,
        "n": sg.n,
        "torsion": group_to_json(sg.torsion),
    }


def split_group_from_json(doc) -> SplitGroup:
    try:
        return SplitGroup(doc["p"], doc["n"], group_from_json(doc["torsion"]))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed split group document: {exc}") from exc


def matrix_instance_to_json(inst: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "matrix_bimodule",
        "p": inst["p"],
        "n": inst["n"],
        "gamma_generators": [[list(r) for r in m] for m in inst["gamma_generators"]],
        "delta_generators": [[list(r) for r in m] for m in inst["delta_generators"]],
        "ground_truth": inst.get("ground_truth"),
    }


def matrix_instance_from_json(doc) -> dict:
    try:
        return {
            "p": int(doc["p"]),
            "n": int(doc["n"]),
            "gamma_generators": [tuple(tuple(x) for x in m) for m in doc["gamma_generators"]],
            "delta_generators": [tuple(tuple(x) for x in m) for m in doc["delta_generators"]],
            "ground_truth": doc.get("ground_truth"),
        }
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed matrix instance: {exc}") from exc


def split_instance_to_json(sg: SplitGroup, gset: EndogenySet, dset: EndogenySet, info: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "split_bimodule",
        "split_group": split_group_to_json(sg),
        "gamma": endogeny_set_to_json(gset),
        "delta": endogeny_set_to_json(dset),
        "info": {k: (list(map(list, v)) if k == "planted_subspace" else v) for k, v in info.items()},
    }


def split_instance_from_json(doc):
    try:
        sg = split_group_from_json(doc["split_group"])
        gset = endogeny_set_from_json(doc["gamma"], ambient=sg.ambient)
        dset = endogeny_set_from_json(doc["delta"], ambient=sg.ambient)
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed split instance: {exc}") from exc
    return sg, gset, dset, doc.get("info", {})


def endogeny_instance_to_json(e: Endogeny) -> dict:
    doc = endogeny_to_json(e)
    doc["format_version"] = FORMAT_VERSION
    doc["kind"] = "endogeny"
    return doc


def field_report_to_json(rep: FieldReport) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "field_report",
        "p": rep.p,
        "n": rep.n,
        "field_basis": [[list(r) for r in m] for m in rep.field_basis],
        "order": rep.order,
        "vs_dimension": rep.vs_dimension,
        "k_basis_of_v": [list(v) for v in rep.k_basis_of_v],
    }


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str):
    return json.loads(text)
