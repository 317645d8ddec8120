"""JSON batch front-end: validated requests in, canonical JSON (and SVG) out."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction as Q
from importlib import resources
from typing import List, Optional, Sequence

import jsonschema

from .interval import interval_A, interval_A_chi
from .models import (ModelPoint, act, make_point, model_relative, project,
                     weighted_coordinates)
from .polyhedra import polyhedron_vertices
from .rootdata import RelativeDatum, build_root_system, preset_relative
from .torusgit import (chamber_of, chi_status, classify_regular_weights,
                       root_hyperplanes, stability_status)
from .treebuilding import interval_tree, p_chi_data
from .valfield import (INF, PuiseuxElement, format_rational, parse_puiseux,
                       parse_rational)

COMMANDS = ("rootsys", "classify", "chambers", "status", "interval",
            "tree", "models", "chi")
_KNOWN_FAMILIES = ("A", "B", "C", "D")
_KNOWN_PRESETS = ("split", "su3", "nonsplit_C", "sl_skew")
_TWO_FACTOR = ("sp4_flag", "su3_pair", "sl3_flag")


class ValidationFailure(Exception):
    """Bad payload; maps to exit status 2."""


class Unsupported(Exception):
    """Recognized request for a family or model outside scope; exit status 3."""


# -- payload decoding ---------------------------------------------------------

def _load_schema(name: str) -> dict:
    root = resources.files("btgit").joinpath("schemas")
    schema = json.loads(root.joinpath(f"{name}.json").read_text())
    defs = json.loads(root.joinpath("defs.json").read_text())["$defs"]
    schema.setdefault("$defs", {}).update(defs)
    return schema


def validate_payload(command: str, payload) -> None:
    try:
        jsonschema.validate(payload, _load_schema(command))
    except jsonschema.ValidationError as exc:
        raise ValidationFailure(f"payload: {exc.message}") from exc


def _rat(x) -> Q:
    if isinstance(x, str):
        v = parse_rational(x)
        if v == INF:
            raise ValidationFailure("'inf' is not accepted on input")
        return v
    if isinstance(x, int):
        return Q(x)
    raise ValidationFailure(f"not a rational: {x!r}")


def _rat_vec(xs) -> tuple:
    return tuple(_rat(x) for x in xs)


def _element(x) -> PuiseuxElement:
    if isinstance(x, list):
        return PuiseuxElement((_rat(q), _rat(c)) for q, c in x)
    try:
        return parse_puiseux(x)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc


def _element_vec(xs) -> tuple:
    if not isinstance(xs, list):
        raise ValidationFailure("expected a list of coordinates")
    return tuple(_element(x) for x in xs)


def _relative(payload) -> RelativeDatum:
    preset = payload.get("preset", "split")
    if preset not in _KNOWN_PRESETS:
        raise Unsupported(f"unsupported preset {preset!r}")
    try:
        if preset == "split":
            family, rank = payload.get("family"), payload.get("rank")
            if family is None or rank is None:
                raise ValidationFailure("split data needs 'family' and 'rank'")
            if family not in _KNOWN_FAMILIES:
                raise Unsupported(f"unsupported family {family!r}")
            return preset_relative("split", datum=build_root_system(family, rank))
        if preset == "su3":
            return preset_relative("su3")
        if preset == "nonsplit_C":
            return preset_relative("nonsplit_C", rank=payload.get("rank"))
        return preset_relative("sl_skew", s=payload.get("s"), d=payload.get("d"))
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc


def _decode_point(model: str, raw) -> ModelPoint:
    if model.startswith("proj(") or model in ("sp4_line", "sp4_quadric"):
        coords = _element_vec(raw)
    elif model.startswith("grass("):
        j, n = (int(a) for a in model[6:-1].split(","))
        if len(raw) == j and all(isinstance(r, list) and len(r) == n for r in raw):
            coords = [_element_vec(r) for r in raw]
        else:
            coords = _element_vec(raw)
    elif model in _TWO_FACTOR:
        if len(raw) != 2:
            raise ValidationFailure(f"{model} needs two coordinate vectors")
        coords = [_element_vec(r) for r in raw]
    else:
        raise Unsupported(f"unsupported model {model!r}")
    try:
        return make_point(model, coords)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc


def _weighted(payload, p: ModelPoint):
    lam = payload.get("lam")
    if p.model in _TWO_FACTOR:
        lam = tuple(lam) if lam is not None else (1, 1)
        return weighted_coordinates(p, lam=lam)
    if lam is not None:
        raise ValidationFailure("'lam' only applies to two-factor models")
    return weighted_coordinates(p)


# -- output encoding ----------------------------------------------------------

def _fmt_vec(v) -> List[str]:
    return [format_rational(a) for a in v]


def _fmt_element(e: PuiseuxElement) -> str:
    if not e:
        return "0"
    parts = []
    for q, c in e.terms:
        if q == 0:
            term = format_rational(c)
        else:
            coef = "" if c == 1 else ("-" if c == -1 else format_rational(c) + "*")
            term = f"{coef}t^{{{format_rational(q)}}}" if q != 1 else f"{coef}t"
        parts.append(term)
    return " + ".join(parts).replace("+ -", "- ")


def _fmt_halfspaces(poly) -> List[dict]:
    return [{"normal": _fmt_vec(n), "offset": format_rational(o)}
            for n, o in poly.halfspaces]


# -- command handlers ---------------------------------------------------------

def _cmd_rootsys(payload) -> dict:
    rel = _relative(payload)
    return {
        "name": rel.name,
        "rank": rel.rank,
        "relative_roots": [_fmt_vec(a) for a in rel.relative_roots],
        "relative_simple": [_fmt_vec(a) for a in rel.relative_simple],
        "gamma": [{"root": _fmt_vec(a), "step": format_rational(s)}
                  for a, s in rel.gamma],
        "gram": [_fmt_vec(row) for row in rel.gram],
        "hyperplanes": [_fmt_vec(h) for h in root_hyperplanes(rel)],
    }


def _cmd_classify(payload) -> dict:
    preset = payload.get("preset", "split")
    if preset not in _KNOWN_PRESETS:
        raise Unsupported(f"unsupported preset {preset!r}")
    if preset == "split" and payload.get("family") not in _KNOWN_FAMILIES:
        raise Unsupported(f"unsupported family {payload.get('family')!r}")
    try:
        table, scan = classify_regular_weights(
            family=payload.get("family"), rank=payload.get("rank"),
            J=payload["J"], preset=preset,
            s=payload.get("s"), d=payload.get("d"))
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    return {"table": table, "scan": scan}


def _cmd_chambers(payload) -> dict:
    rel = _relative(payload)
    hyps = root_hyperplanes(rel)
    cells = []
    for w in payload.get("weights", ()):
        wv = _rat_vec(w)
        if len(wv) == rel.datum.ambient_dim:
            wv = rel.restrict(wv)
        elif len(wv) != rel.rank:
            raise ValidationFailure(
                f"weights need {rel.rank} or {rel.datum.ambient_dim} entries")
        cid = chamber_of(wv, hyps)
        cells.append({"weight": _fmt_vec(wv), "signs": list(cid.signs),
                      "containing": list(cid.containing())})
    return {"rank": rel.rank, "hyperplanes": [_fmt_vec(h) for h in hyps],
            "cells": cells}


def _cmd_status(payload) -> dict:
    p = _decode_point(payload["model"], payload["point"])
    rel = model_relative(p.model)
    wp = _weighted(payload, p)
    if "chi" in payload:
        return {"status": chi_status(wp, rel, _rat_vec(payload["chi"]))}
    return {"status": stability_status(wp, rel)}


def _cmd_interval(payload) -> dict:
    p = _decode_point(payload["model"], payload["point"])
    rel = model_relative(p.model)
    wp = _weighted(payload, p)
    res = interval_A(wp, rel)
    out = {
        "rank": rel.rank,
        "empty": res.is_empty(),
        "c_star": format_rational(res.c_star),
        "bounded": res.bounded,
        "singleton": None,
        "halfspaces": [] if res.is_empty() else _fmt_halfspaces(res.polyhedron),
        "wall_bounds": [{"root": _fmt_vec(a), "sup": format_rational(n)}
                        for a, n in sorted(res.wall_bounds.items())],
    }
    if res.singleton is not None:
        out["singleton"] = _fmt_vec(res.singleton.coords)
        if rel.rank == 1:
            out["face"] = f"u={format_rational(res.singleton.coords[0])}"
    if "chi" in payload:
        if res.is_empty():
            raise ValidationFailure("chi shift needs a nonempty interval")
        n, face = interval_A_chi(wp, rel, _rat_vec(payload["chi"]))
        out["chi_value"] = format_rational(n)
        out["chi_face"] = None if face is None else _fmt_halfspaces(face)
    return out


def _cmd_tree(payload) -> dict:
    coords = _element_vec(payload["point"])
    if len(coords) != 2:
        raise ValidationFailure("tree points live on the projective line")
    try:
        x = make_point("proj(2)", coords)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    R = _rat(payload.get("R", 4))
    res = interval_tree(x, R)
    out = {
        "interval": "empty" if res.is_empty() else [
            {"b": _fmt_element(z.b), "u": format_rational(z.u)}
            for z in res.points],
        "certificate": res.certificate,
        "radius": None if res.radius is None else format_rational(res.radius),
        "witness": None,
    }
    if res.witness is not None:
        g = res.witness.g
        out["witness"] = [[_fmt_element(c) for c in row] for row in g]
        if g[0][1]:  # swap chart: degenerate end at [0:1]
            out["witness_end"] = "end [0:1]"
        else:
            out["witness_end"] = f"end [1:{_fmt_element(g[1][0])}]"
    return out


def _cmd_models(payload) -> dict:
    p = _decode_point(payload["model"], payload["point"])
    if "act" in payload:
        g = [_element_vec(row) for row in payload["act"]]
        try:
            p = act(g, p)
        except ValueError as exc:
            raise ValidationFailure(str(exc)) from exc
    if "project" in payload:
        try:
            p = project(p, 1 if payload["project"] == "sp4_line" else 2)
        except ValueError as exc:
            raise ValidationFailure(str(exc)) from exc
    return {"model": p.model, "point": p.to_json(),
            "display": [[_fmt_element(c) for c in vec] for vec in p.data]}


def _cmd_chi(payload) -> dict:
    if "model" in payload:
        if "point" not in payload:
            raise ValidationFailure("a model request needs a point")
        p = _decode_point(payload["model"], payload["point"])
        rel = model_relative(p.model)
    else:
        rel = _relative(payload)
        p = None
    chiv = _rat_vec(payload["chi"])
    if len(chiv) != rel.rank:
        raise ValidationFailure(f"chi needs {rel.rank} entries")
    try:
        data = p_chi_data(chiv, rel)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    out = {
        "rank": rel.rank,
        "chambers": [list(signs) for signs in data.chambers],
        "delta": _fmt_vec(data.delta),
        "tau_halfspaces": _fmt_halfspaces(data.tau),
    }
    if p is not None:
        wp = _weighted(payload, p)
        out["status"] = chi_status(wp, rel, chiv)
        res = interval_A(wp, rel)
        if res.is_empty():
            out["value"], out["face"] = format_rational(INF), None
        else:
            n, face = interval_A_chi(wp, rel, chiv)
            out["value"] = format_rational(n)
            out["face"] = None if face is None else _fmt_halfspaces(face)
    return out


_HANDLERS = {
    "rootsys": _cmd_rootsys,
    "classify": _cmd_classify,
    "chambers": _cmd_chambers,
    "status": _cmd_status,
    "interval": _cmd_interval,
    "tree": _cmd_tree,
    "models": _cmd_models,
    "chi": _cmd_chi,
}


def run(command: str, payload) -> dict:
    """Validate one request and produce its JSON-able result."""
    if command not in _HANDLERS:
        raise ValidationFailure(f"unknown command {command!r}")
    validate_payload(command, payload)
    return _HANDLERS[command](payload)


def serialize(result: dict) -> str:
    """Canonical byte-stable encoding: sorted keys, no float formatting."""
    return json.dumps(result, sort_keys=True, separators=(",", ":")) + "\n"


# -- SVG rendering ------------------------------------------------------------

_SVG_HEAD = ('<svg xmlns="http://www.w3.org/2000/svg" viewBox="-120 -120 240 240" '
             'width="480" height="480">')


def _pt(x: float, y: float) -> str:
    return f"{x:.2f},{-y:.2f}"  # math orientation: y grows upward


def render_svg(command: str, result: dict) -> bytes:
    """Deterministic figure for rank <= 2 interval/chambers/tree results."""
    if command == "chambers":
        return _svg_chambers(result)
    if command == "interval":
        return _svg_interval(result)
    if command == "tree":
        return _svg_tree(result)
    raise ValidationFailure(f"no rendering for command {command!r}")


def _svg_doc(body: List[str]) -> bytes:
    return ("\n".join([_SVG_HEAD] + body + ["</svg>"]) + "\n").encode()


def _svg_empty(label: str) -> bytes:
    return _svg_doc([
        '<circle cx="0" cy="0" r="6" fill="none" stroke="black"/>',
        '<line x1="-5" y1="5" x2="5" y2="-5" stroke="black"/>',
        f'<text x="0" y="20" text-anchor="middle" font-size="10">{label}</text>',
    ])


def _svg_chambers(result: dict) -> bytes:
    rank = result["rank"]
    if rank > 2:
        raise ValidationFailure("rendering needs rank <= 2")
    body = ['<line x1="-100" y1="0" x2="100" y2="0" stroke="#888"/>',
            '<line x1="0" y1="-100" x2="0" y2="100" stroke="#888"/>']
    rays = []
    if rank == 1:
        body.append('<circle cx="0" cy="0" r="3" fill="black"/>')
        rays = [0.0, math.pi]
    else:
        for k, h in enumerate(result["hyperplanes"]):
            a, b = (float(parse_rational(c)) for c in h)
            # the line where the normal (a, b) vanishes runs along (-b, a)
            n = math.hypot(a, b)
            dx, dy = -b / n, a / n
            body.append(f'<line x1="{100 * dx:.2f}" y1="{-100 * dy:.2f}" '
                        f'x2="{-100 * dx:.2f}" y2="{100 * dy:.2f}" stroke="black"/>')
            body.append(f'<text x="{108 * dx:.2f}" y="{-108 * dy:.2f}" '
                        f'text-anchor="middle" font-size="9">H{k}</text>')
            rays.extend([math.atan2(dy, dx), math.atan2(-dy, -dx)])
    rays = sorted(set(round(r, 9) for r in rays))
    for i, lo in enumerate(rays):
        hi = rays[(i + 1) % len(rays)] + (2 * math.pi if i + 1 == len(rays) else 0)
        mid = (lo + hi) / 2
        body.append(f'<text x="{70 * math.cos(mid):.2f}" y="{-70 * math.sin(mid):.2f}"'
                    f' text-anchor="middle" font-size="10">C{i}</text>')
    for cell in result.get("cells", ()):
        w = [float(parse_rational(c)) for c in cell["weight"]]
        x, y = (w[0], 0.0) if rank == 1 else (w[0], w[1])
        n = max(math.hypot(x, y), 1e-9)
        s = min(90.0 / n, 30.0)
        body.append(f'<circle cx="{s * x:.2f}" cy="{-s * y:.2f}" r="2.5" '
                    'fill="crimson"/>')
    return _svg_doc(body)


def _svg_interval(result: dict) -> bytes:
    rank = result["rank"]
    if rank > 2:
        raise ValidationFailure("rendering needs rank <= 2")
    if result["empty"]:
        return _svg_empty("empty")
    body = ['<line x1="-100" y1="0" x2="100" y2="0" stroke="#888"/>']
    if rank == 2:
        body.append('<line x1="0" y1="-100" x2="0" y2="100" stroke="#888"/>')
    if result["singleton"] is not None:
        v = [float(parse_rational(c)) for c in result["singleton"]]
        x, y = (v[0], 0.0) if rank == 1 else (v[0], v[1])
        s = 40.0
        body.append(f'<circle cx="{s * x:.2f}" cy="{-s * y:.2f}" r="4" fill="black"/>')
        body.append(f'<text x="{s * x:.2f}" y="{-s * y - 10:.2f}" '
                    f'text-anchor="middle" font-size="10">'
                    f'{"(" + ", ".join(result["singleton"]) + ")"}</text>')
        return _svg_doc(body)
    if not result["bounded"]:
        body.append('<text x="0" y="40" text-anchor="middle" font-size="10">'
                    'unbounded locus</text>')
        return _svg_doc(body)
    from .polyhedra import QPolyhedron
    halves = tuple((tuple(parse_rational(c) for c in h["normal"]),
                    parse_rational(h["offset"])) for h in result["halfspaces"])
    verts = polyhedron_vertices(QPolyhedron(halves))
    pts = sorted((float(v[0]), float(v[1]) if rank == 2 else 0.0) for v in verts)
    s = 40.0
    if len(pts) == 2 or rank == 1:
        (x1, y1), (x2, y2) = pts[0], pts[-1]
        body.append(f'<line x1="{s * x1:.2f}" y1="{-s * y1:.2f}" x2="{s * x2:.2f}" '
                    f'y2="{-s * y2:.2f}" stroke="black" stroke-width="3"/>')
    else:
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        ring = sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        path = " ".join(_pt(s * x, s * y) for x, y in ring)
        body.append(f'<polygon points="{path}" fill="#ddd" stroke="black"/>')
    return _svg_doc(body)


def _svg_tree(result: dict) -> bytes:
    if result["interval"] == "empty":
        return _svg_empty("empty tree locus")
    body = ['<line x1="0" y1="100" x2="0" y2="-100" stroke="black"/>',
            '<text x="0" y="112" text-anchor="middle" font-size="9">u=0</text>']
    for z in result["interval"]:
        u = float(parse_rational(z["u"]))
        y = 100.0 - 50.0 * u
        body.append(f'<circle cx="0" cy="{y:.2f}" r="4" fill="black"/>')
        body.append(f'<text x="10" y="{y:.2f}" font-size="10">'
                    f'b={z["b"]}, u={z["u"]}</text>')
    return _svg_doc(body)


# -- entry point --------------------------------------------------------------

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="btgit",
        description="Exact torus GIT computations: JSON requests in, "
                    "canonical JSON (and optional SVG) out.")
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument("--in", dest="infile", default="-",
                        help="payload file, or - for stdin")
    parser.add_argument("--out", dest="outfile", default="-",
                        help="result file, or - for stdout")
    parser.add_argument("--svg", dest="svgfile",
                        help="also render the result (rank <= 2)")
    args = parser.parse_args(argv)
    try:
        text = (sys.stdin.read() if args.infile == "-"
                else open(args.infile).read())
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationFailure(f"payload is not JSON: {exc}") from exc
        result = run(args.command, payload)
        if args.svgfile:
            svg = render_svg(args.command, result)
            with open(args.svgfile, "wb") as fh:
                fh.write(svg)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Unsupported as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    doc = serialize(result)
    if args.outfile == "-":
        sys.stdout.write(doc)
    else:
        with open(args.outfile, "w") as fh:
            fh.write(doc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
