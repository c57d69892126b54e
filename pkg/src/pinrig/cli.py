"""Command-line interface.

Exit codes: 0 when the queried property holds, 1 when it fails (the report
carries a machine-readable witness), 2 on input errors.  Randomized commands
take an explicit --seed and echo it in the report, so runs are reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import assur as assur_mod
from . import counting, fileio, generate, numeric, pebble
from .canon import canonical_code
from .errors import (CertificateSearchExhausted, GraphError,
                     NotIsostaticError, PinrigError, SizeLimitError)
from .graphs import PinnedGraph, vkey

PASS, FAIL, ERROR = 0, 1, 2


def _emit(doc):
    print(json.dumps(doc, indent=2, sort_keys=True, default=str))


def _fail_input(msg):
    print(f"error: {msg}", file=sys.stderr)
    return ERROR


def _resolve_vertex(g, token):
    hits = [v for v in g.vertices if str(v) == token]
    if len(hits) != 1:
        raise GraphError(f"vertex {token!r} does not name exactly one vertex")
    return hits[0]


# -- dof -----------------------------------------------------------------------

def cmd_dof(args):
    schema = fileio.load_linkage(args.linkage)
    before = counting.grubler_dof(schema)
    reduced = counting.remove_drivers(schema)
    after = counting.grubler_dof(reduced)
    doc = {
        "F": before.dof,
        "link_count": before.link_count,
        "constraint_sum": before.constraint_sum,
        "lower_bound_caveat": bool(before.overbraced),
        "after_driver_removal": {
            "F": after.dof,
            "link_count": after.link_count,
            "constraint_sum": after.constraint_sum,
            "lower_bound_caveat": bool(after.overbraced),
        },
    }
    if before.overbraced:
        doc["overbraced_subcollection"] = list(before.overbraced_witness)
    if after.overbraced:
        doc["after_driver_removal"]["overbraced_subcollection"] = \
            list(after.overbraced_witness)
    _emit(doc)
    return PASS


# -- check ---------------------------------------------------------------------

def _check_laman(g):
    m = g.to_multigraph()
    report = pebble.pebble_rank(m)
    ok = not report.rejected
    doc = {"mode": "laman", "independent": ok, "rank": report.rank,
           "edges": m.m}
    if not ok:
        doc["rejected_edges"] = [list(e) for e in report.rejected_edges]
        if m.n <= counting.ORACLE_MAX_VERTICES:
            witness = counting.laman_violation(m)
            if witness:
                doc["witness_subgraph"] = {
                    "vertices": list(witness),
                    "bound": 2 * len(witness) - 3,
                }
    return ok, doc


def _check_pinned(g):
    if len(g.pins) < 2:
        return False, {"mode": "pinned", "isostatic": False,
                       "reason": "fewer than two pins"}
    ok = pebble.pinned_isostatic(g)
    doc = {"mode": "pinned", "isostatic": ok}
    if not ok:
        doc["pinned_dof"] = pebble.pinned_dof(g)
        if g.n <= counting.ORACLE_MAX_VERTICES:
            witness = counting.pinned_violation(g)
            if witness and witness[0] == "subgraph":
                _, sub_i, sub_p, count, bound = witness
                doc["witness_subgraph"] = {"inner": list(sub_i),
                                           "pins": list(sub_p),
                                           "edges": count, "bound": bound}
            elif witness:
                doc["witness_count"] = {"edges": witness[1], "required": witness[2]}
    return ok, doc


def _assur_witness(g, doc):
    """Attach the culprit: a proper isostatic subgraph or an extra circuit."""
    violation = assur_mod.minimality_violation(g) if g.n <= counting.ORACLE_MAX_VERTICES else None
    if violation:
        doc["witness_subgraph"] = {"inner": list(violation[0]),
                                   "pins": list(violation[1])}
    star, m, circuits = pebble.contraction_circuits(g)
    for idxs in circuits:
        if len(idxs) < g.m:
            doc["witness_extra_circuit"] = [list(g.edges[i]) for i in sorted(idxs)]
            break


def cmd_check(args):
    g, _ = fileio.load_graph(args.graph)
    if args.mode == "laman":
        ok, doc = _check_laman(g)
    elif args.mode == "pinned":
        ok, doc = _check_pinned(g)
    else:
        methods = _parse_methods(args.method)
        verdict = assur_mod.is_assur(g, methods=methods, seed=args.seed)
        ok = verdict.overall
        doc = {"mode": "assur", "assur": ok, "seed": args.seed,
               "conditions": verdict.evaluated(),
               "disagreement": verdict.disagreement}
        if verdict.reason:
            doc["reason"] = verdict.reason
        if not ok and verdict.reason is None:
            _assur_witness(g, doc)
        if not ok and isinstance(verdict.reason, str) and "DOF" in verdict.reason:
            doc["pinned_dof"] = pebble.pinned_dof(g)
    _emit(doc)
    return PASS if ok else FAIL


def _parse_methods(method):
    if method == "all":
        return assur_mod.ALL_METHODS
    return (method,)


# -- decompose -------------------------------------------------------------------

def cmd_decompose(args):
    g, _ = fileio.load_graph(args.graph)
    try:
        scheme = assur_mod.decompose(g, seed=args.seed)
    except NotIsostaticError as exc:
        _emit({"decomposable": False, "reason": str(exc),
               "pinned_dof": exc.dof})
        return FAIL
    doc = scheme_report(scheme)
    if args.seed is not None:
        doc["seed"] = args.seed
    _emit(doc)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(fileio.scheme_to_dot(scheme))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(fileio.scheme_to_dict(scheme), fh, indent=2, default=str)
            fh.write("\n")
    return PASS


def scheme_report(scheme):
    return {
        "decomposable": True,
        "component_count": len(scheme.components),
        "levels": scheme.levels,
        "components": [
            {"id": c.cid, "level": c.level,
             "inner": sorted(c.graph.inner, key=vkey),
             "pins": sorted(c.graph.pins, key=vkey),
             "edges": [list(e) for e in c.graph.edges]}
            for c in scheme.components
        ],
        "covers": [list(p) for p in scheme.covers],
    }


# -- motion ----------------------------------------------------------------------

def _positions_from_file(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphError("config file must map vertex ids to [x, y]")
    return {k: (v[0], v[1]) for k, v in doc.items()}


def _match_positions(g, raw):
    """Config files address vertices by string form; align with actual ids."""
    out = {}
    for v in g.vertices:
        if v in raw:
            out[v] = raw[v]
        elif str(v) in raw:
            out[v] = raw[str(v)]
        else:
            raise GraphError(f"configuration misses vertex {v!r}")
    return out


def cmd_motion(args):
    g, inline_pos = fileio.load_graph(args.graph)
    if not g.inner:
        return _fail_input("graph has no inner vertices")
    if args.remove_edge:
        try:
            u_tok, w_tok = args.remove_edge.split(",")
        except ValueError:
            return _fail_input("--remove-edge expects 'u,w'")
        u = _resolve_vertex(g, u_tok.strip())
        w = _resolve_vertex(g, w_tok.strip())
        g = g.without_edge(u, w)

    doc = {"inner": sorted(g.inner, key=vkey), "edges": g.m}
    if args.config:
        config = _match_positions(g, _positions_from_file(args.config))
        basis = numeric.motion_space(g, config)
        moving = sorted((v for v in g.inner
                         if any(_nonzero(vec[v]) for vec in basis.vectors)), key=vkey)
        doc.update({"source": "config", "field": basis.field, "dim": basis.dim,
                    "basis": [{str(v): [_pretty(x), _pretty(y)]
                               for v, (x, y) in vec.items()} for vec in basis.vectors]})
    elif inline_pos and all(v in inline_pos for v in g.vertices):
        config = inline_pos
        basis = numeric.motion_space(g, config)
        moving = sorted((v for v in g.inner
                         if any(_nonzero(vec[v]) for vec in basis.vectors)), key=vkey)
        doc.update({"source": "inline positions", "field": basis.field,
                    "dim": basis.dim,
                    "basis": [{str(v): [_pretty(x), _pretty(y)]
                               for v, (x, y) in vec.items()} for vec in basis.vectors]})
    else:
        rng = random.Random(args.seed)
        config = numeric.random_configuration(g, rng)
        basis = numeric.motion_space(g, config, field="mod")
        moving = sorted((v for v in g.inner
                         if any(x or y for x, y in (vec[v] for vec in basis.vectors))),
                        key=vkey)
        doc.update({"source": "random generic configuration", "seed": args.seed,
                    "dim": basis.dim})
    fixed = sorted(set(g.inner) - set(moving), key=vkey)
    doc["moving"] = moving
    doc["fixed"] = fixed
    doc["rigid"] = basis.dim == 0
    _emit(doc)
    return PASS


def _nonzero(pair):
    x, y = pair
    if isinstance(x, float) or isinstance(y, float):
        return abs(x) > 1e-9 or abs(y) > 1e-9
    return bool(x) or bool(y)


def _pretty(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return round(x, 12)
    return x


# -- generate --------------------------------------------------------------------

def cmd_generate(args):
    if args.circuits == args.assur:
        return _fail_input("choose exactly one of --circuits / --assur")
    if args.circuits:
        catalog = generate.circuit_catalog(args.max_vertices)
        kind = "circuit"

        def to_doc(g):
            # circuits are plain graphs; store them with every vertex inner
            return fileio.graph_to_dict(PinnedGraph(g.vertices, (), g.edges))
    else:
        catalog = generate.assur_catalog(args.max_vertices)
        kind = "assur"
        to_doc = fileio.graph_to_dict
    counts = {str(n): len(graphs) for n, graphs in catalog.items()}
    codes = {str(n): [canonical_code(g) for g in graphs]
             for n, graphs in catalog.items()}
    _emit({"kind": kind, "max_vertices": args.max_vertices,
           "counts": counts, "codes": codes})
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for n, graphs in catalog.items():
            for i, g in enumerate(graphs):
                path = os.path.join(args.out, f"{kind}_n{n}_{i}.json")
                with open(path, "w", encoding="utf-8") as fh:
                    json.dump(to_doc(g), fh, indent=2, default=str)
                    fh.write("\n")
    return PASS


# -- certify / verify --------------------------------------------------------------

def cmd_certify(args):
    g, _ = fileio.load_graph(args.graph)
    try:
        cert = generate.certify(g, time_limit=args.time_limit)
    except CertificateSearchExhausted as exc:
        _emit({"certified": False, "reason": str(exc)})
        return FAIL
    except GraphError as exc:
        _emit({"certified": False, "reason": str(exc)})
        return FAIL
    doc = fileio.certificate_to_dict(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, default=str)
            fh.write("\n")
    _emit(doc)
    return PASS


def cmd_verify(args):
    cert = fileio.load_certificate(args.certificate)
    ok = generate.verify_certificate(cert)
    _emit({"valid": ok, "claimed": cert.claimed})
    return PASS if ok else FAIL


# -- entry point --------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="pinrig",
        description="Combinatorial rigidity analysis of pinned bar-and-joint graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dof", help="Grubler mobility count for a linkage file")
    p.add_argument("linkage")
    p.set_defaults(func=cmd_dof)

    p = sub.add_parser("check", help="check a graph property")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("laman", "pinned", "assur"), default="assur")
    p.add_argument("--method",
                   choices=("all", "i", "ii", "iii", "iv"), default="all",
                   help="which of the equivalent characterizations to run (assur mode)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="decompose into Assur components")
    p.add_argument("graph")
    p.add_argument("--dot", help="write the scheme DAG in DOT format")
    p.add_argument("--json", help="write the scheme as JSON")
    p.add_argument("--seed", type=int, default=None,
                   help="shuffle edge insertion order (result is invariant)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("motion", help="first-order motion report")
    p.add_argument("graph")
    p.add_argument("--remove-edge", metavar="U,W")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON file mapping vertex ids to [x, y]")
    p.set_defaults(func=cmd_motion)

    p = sub.add_parser("generate", help="enumerate circuit or Assur classes")
    p.add_argument("--circuits", action="store_true")
    p.add_argument("--assur", action="store_true")
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--out", help="directory for one graph file per class")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("certify", help="construction certificate for an Assur graph")
    p.add_argument("graph")
    p.add_argument("--out", help="write the certificate JSON here")
    p.add_argument("--time-limit", type=float, default=generate.CERTIFY_TIME_LIMIT)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="replay and check a certificate file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        return _fail_input(f"cannot read {exc.filename}")
    except SizeLimitError as exc:
        return _fail_input(str(exc))
    except (GraphError, PinrigError) as exc:
        return _fail_input(str(exc))


if __name__ == "__main__":
    sys.exit(main())
