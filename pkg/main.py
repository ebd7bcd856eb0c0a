import functools
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import click

from catalog import catalog_arrangement, default_catalog, is_catalog_ref
from core.config import DEFAULT_SEED, TOLERANCES, Tolerances, setup_logging
from core.exceptions import ConeSphereError, ParseError
from geometry.arrangement import LabeledVertexSet, LoopArrangement, validate
from geometry.decomposition import (
    area_form, build_complex, signature, supplement_residual, total_area, triangle_identities, verify_cone_deficits,
)
from geometry.developing import compare_face_sides, frame_matrix, unfold
from geometry.moduli import distance_report, ideal_simplex_check, normalize, orbit_report
from geometry.search import search_arrangement
from schemas.reports import AreaFormReport, FrameMatrixReport
from schemas.surface import FramePairSchema
from utils.exporters import export_obj, export_svg
from utils.serialization import (
    parse_arrangement, parse_frame, parse_lengths, parse_search_spec, parse_surface, serialize_arrangement,
)
from utils.validators import validate_deficits, validate_lengths, validate_tolerance_factor

logger = logging.getLogger(__name__)

D6_LABELS = ("a", "b", "c", "d", "e", "f")


@dataclass
class CliState:
    as_json: bool
    tolerances: Tolerances


# -------------------------------
# Input helpers
# -------------------------------
def read_text(ref: str) -> str:
    try:
        return Path(ref).read_text(encoding="utf-8")
    except OSError as e:
        raise click.UsageError(f"cannot read {ref}: {e.strerror or e}") from e


def load_arrangement(ref: str, tolerances: Tolerances) -> LoopArrangement:
    """File path or catalog:NAME"""
    if is_catalog_ref(ref):
        try:
            return catalog_arrangement(ref, tolerances)
        except KeyError as e:
            raise click.UsageError(str(e.args[0])) from e
    return parse_arrangement(read_text(ref), name=Path(ref).stem, tolerances=tolerances)


def load_lengths(ref: Optional[str], arr: LoopArrangement) -> Dict[str, float]:
    if ref is None:
        return {label: 1.0 for label in arr.labels}
    lengths = parse_lengths(read_text(ref), arr.labels)
    result = validate_lengths(lengths, arr.labels)
    if not result["valid"]:
        raise click.BadParameter(result["message"], param_hint="--lengths")
    return lengths


def load_surface(arr: Optional[str], lengths_ref: Optional[str], surface_ref: Optional[str],
                 tolerances: Tolerances) -> Tuple[LoopArrangement, Dict[str, float]]:
    """--surface FILE, or --arr with optional --lengths"""
    if surface_ref is None:
        if arr is None:
            raise click.UsageError("either --arr or --surface is required")
        arrangement = load_arrangement(arr, tolerances)
        return arrangement, load_lengths(lengths_ref, arrangement)
    if arr is not None or lengths_ref is not None:
        raise click.UsageError("--surface replaces --arr and --lengths")

    def resolve(ref: str) -> LoopArrangement:
        # file references are relative to the surface file
        if is_catalog_ref(ref) or Path(ref).is_absolute():
            return load_arrangement(ref, tolerances)
        return load_arrangement(str(Path(surface_ref).parent / ref), tolerances)

    arrangement, lengths = parse_surface(read_text(surface_ref), resolve, tolerances)
    result = validate_lengths(lengths, arrangement.labels)
    if not result["valid"]:
        raise click.BadParameter(result["message"], param_hint="--surface")
    return arrangement, lengths


def apply_deficits(arr: LoopArrangement, text: Optional[str], tolerances: Tolerances) -> LoopArrangement:
    if text is None:
        return arr
    try:
        deficits = [float(part) for part in text.split(",")]
    except ValueError as e:
        raise click.BadParameter(f"not a comma-separated list of numbers: {text}", param_hint="--deficits") from e
    result = validate_deficits(deficits, arr.n_pairs, tolerances.deficit_sum)
    if not result["valid"]:
        raise click.BadParameter(result["message"], param_hint="--deficits")
    return arr.with_deficits(deficits)


def load_frame(ref: Optional[str], fallback: Optional[str]):
    """Frame file, or the catalog frame of the entry named by fallback"""
    if ref is not None:
        return parse_frame(read_text(ref))
    if fallback is not None and is_catalog_ref(fallback):
        return default_catalog().frame(fallback.split(":", 1)[1])
    raise click.BadParameter("a frame file is required unless the arrangement comes from the catalog",
                             param_hint="--frame")


def emit(state: CliState, payload, text: str) -> None:
    if state.as_json:
        data = payload.model_dump(mode="json", by_alias=True) if hasattr(payload, "model_dump") else payload
        click.echo(json.dumps(data, indent=2))
    else:
        click.echo(text)


def reports_errors(func):
    """Domain failures exit 1, malformed input exits 2; both as structured diagnostics on stderr"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        state: CliState = ctx.find_object(CliState)
        try:
            return func(*args, **kwargs)
        except ParseError as e:
            fail(ctx, state, e.to_dict(), 2)
        except ConeSphereError as e:
            fail(ctx, state, e.to_dict(), 1)
        except (ValueError, KeyError) as e:
            message = str(e.args[0]) if e.args else str(e)
            fail(ctx, state, {"error": "invalid_input", "message": message}, 2)
    return wrapper


def fail(ctx: click.Context, state: CliState, data: dict, code: int) -> None:
    if state is not None and state.as_json:
        click.echo(json.dumps(data), err=True)
    else:
        click.echo(f"error ({data['error']}): {data['message']}", err=True)
    ctx.exit(code)


# -------------------------------
# Commands
# -------------------------------
@click.group()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output")
@click.option("--tolerance", type=float, default=1.0, show_default=True, help="Scale factor for audit tolerances")
@click.pass_context
def cli(ctx: click.Context, as_json: bool, tolerance: float):
    """Cone spheres from great-circle loop arrangements"""
    setup_logging()
    result = validate_tolerance_factor(tolerance)
    if not result["valid"]:
        raise click.BadParameter(result["message"], param_hint="--tolerance")
    ctx.obj = CliState(as_json=as_json, tolerances=TOLERANCES.scaled(tolerance))


@cli.command("validate")
@click.argument("arr")
@click.pass_obj
@reports_errors
def validate_command(state: CliState, arr: str):
    """Check every arrangement invariant"""
    arrangement = load_arrangement(arr, state.tolerances)
    report = validate(arrangement, state.tolerances)
    lines = ["valid"] if report.ok else [f"{issue.kind.value}: {issue.message}" for issue in report.issues]
    emit(state, report, "\n".join(lines))
    if not report.ok:
        click.get_current_context().exit(1)


@cli.command()
@click.option("--spec", "spec_ref", required=True, help="Search spec JSON")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the arrangement here")
@click.pass_obj
@reports_errors
def search(state: CliState, spec_ref: str, seed: int, out: Optional[str]):
    """Realize loop classes by great circles"""
    spec = parse_search_spec(read_text(spec_ref))
    vs = LabeledVertexSet.from_points(spec.vertices)
    arr = search_arrangement([loop.sign_class for loop in spec.loops], vs, seed=seed,
                             labels=[loop.label for loop in spec.loops], deficits=spec.deficits,
                             tolerances=state.tolerances, name=Path(spec_ref).stem)
    text = serialize_arrangement(arr)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}", err=True)
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--arr", default=None, help="Arrangement file or catalog:NAME")
@click.option("--lengths", "lengths_ref", default=None, help="Edge lengths per loop (unit when omitted)")
@click.option("--surface", "surface_ref", default=None, help="Surface JSON in place of --arr and --lengths")
@click.pass_obj
@reports_errors
def build(state: CliState, arr: Optional[str], lengths_ref: Optional[str], surface_ref: Optional[str]):
    """Glue the parallelogram complex"""
    arrangement, lengths = load_surface(arr, lengths_ref, surface_ref, state.tolerances)
    complex_ = build_complex(arrangement, lengths, state.tolerances)
    summary = {
        "quads": complex_.n_quads,
        "cone_points": complex_.n_cone_points,
        "edges": complex_.cells.n_edges,
        "euler_characteristic": complex_.euler_characteristic,
        "degenerate_quads": complex_.degenerate_quads,
        "total_area": total_area(complex_),
    }
    emit(state, summary, "\n".join(f"{key}: {value}" for key, value in summary.items()))


@cli.command()
@click.option("--arr", default=None, help="Arrangement file or catalog:NAME")
@click.option("--lengths", "lengths_ref", default=None)
@click.option("--surface", "surface_ref", default=None, help="Surface JSON in place of --arr and --lengths")
@click.option("--deficits", default=None, help="Comma-separated deficits replacing the arrangement's")
@click.pass_obj
@reports_errors
def audit(state: CliState, arr: Optional[str], lengths_ref: Optional[str], surface_ref: Optional[str],
          deficits: Optional[str]):
    """Compare measured cone deficits with the prescribed ones"""
    arrangement, lengths = load_surface(arr, lengths_ref, surface_ref, state.tolerances)
    arrangement = apply_deficits(arrangement, deficits, state.tolerances)
    complex_ = build_complex(arrangement, lengths, state.tolerances)
    report = verify_cone_deficits(complex_, tolerances=state.tolerances)
    angles, lunes = triangle_identities(arrangement, complex_)
    lines = [f"cone point {row.cone_point} {'/'.join(row.labels) or '-'}: deficit {row.measured:.12f} "
             f"expected {row.expected:.12f} {'ok' if row.passed else 'FAIL'}" for row in report.rows]
    lines.append(f"total deficit {report.total_deficit:.12f}")
    lines.append(f"supplement residual {supplement_residual(complex_):.3e}, "
                 f"triangle residual {angles:.3e}, lune residual {lunes:.3e}")
    lines.append("pass" if report.passed else "FAIL")
    emit(state, report, "\n".join(lines))
    if not report.passed:
        click.get_current_context().exit(1)


@cli.command("area-form")
@click.option("--arr", required=True, help="Arrangement file or catalog:NAME")
@click.option("--deficits", default=None, help="Comma-separated deficits replacing the arrangement's")
@click.pass_obj
@reports_errors
def area_form_command(state: CliState, arr: str, deficits: Optional[str]):
    """Area form matrix and its signature"""
    arrangement = apply_deficits(load_arrangement(arr, state.tolerances), deficits, state.tolerances)
    form = area_form(arrangement)
    report = AreaFormReport(labels=list(form.labels), matrix=form.matrix.tolist(),
                            signature=signature(form, state.tolerances))
    rows = ["  ".join(f"{x:+.6f}" for x in row) for row in form.matrix]
    sig = report.signature
    emit(state, report, "\n".join([" ".join(form.labels), *rows,
                                   f"signature ({sig.positives}, {sig.negatives}, {sig.zeros})"]))


@cli.command("unfold")
@click.option("--arr", default=None, help="Arrangement file or catalog:NAME")
@click.option("--lengths", "lengths_ref", default=None)
@click.option("--surface", "surface_ref", default=None, help="Surface JSON in place of --arr and --lengths")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), default=None)
@click.option("--obj", "obj_path", type=click.Path(dir_okay=False), default=None)
@click.option("--base", type=int, default=0, show_default=True, help="Base quad")
@click.option("--policy", type=click.Choice(["bfs", "dfs"]), default="bfs", show_default=True)
@click.pass_obj
@reports_errors
def unfold_command(state: CliState, arr: Optional[str], lengths_ref: Optional[str], surface_ref: Optional[str],
                   svg_path: Optional[str], obj_path: Optional[str], base: int, policy: str):
    """Develop the surface into the plane"""
    arrangement, lengths = load_surface(arr, lengths_ref, surface_ref, state.tolerances)
    complex_ = build_complex(arrangement, lengths, state.tolerances)
    dev = unfold(complex_, base, policy)
    if svg_path:
        Path(svg_path).write_text(export_svg(dev), encoding="utf-8")
    if obj_path:
        Path(obj_path).write_text(export_obj(dev, state.tolerances.merge), encoding="utf-8")
    summary = {"quads": dev.n_quads, "base": base, "policy": policy, "area": dev.total_area(),
               "svg": svg_path, "obj": obj_path}
    emit(state, summary, "\n".join(f"{key}: {value}" for key, value in summary.items() if value is not None))


@cli.command("frame-matrix")
@click.option("--arr", required=True, help="Arrangement file or catalog:NAME")
@click.option("--frame", "frame_ref", default=None, help="Frame JSON (catalog frame by default)")
@click.option("--policy", type=click.Choice(["bfs", "dfs"]), default="bfs", show_default=True)
@click.pass_obj
@reports_errors
def frame_matrix_command(state: CliState, arr: str, frame_ref: Optional[str], policy: str):
    """Matrix taking edge lengths to frame vectors"""
    arrangement = load_arrangement(arr, state.tolerances)
    frame = load_frame(frame_ref, arr)
    if isinstance(frame, FramePairSchema):
        raise click.BadParameter("frame-matrix takes a single frame, not an a/b pair", param_hint="--frame")
    m = frame_matrix(arrangement, None, frame, policy)
    report = FrameMatrixReport(labels=list(m.labels), matrix=m.matrix.tolist(), determinant=m.determinant)
    rows = ["  ".join(f"{x:+.6f}" for x in row) for row in m.matrix]
    emit(state, report, "\n".join([" ".join(m.labels), *rows, f"det {m.determinant:.12g}"]))


@cli.command("compare-sides")
@click.option("--a", "a_ref", required=True, help="First arrangement")
@click.option("--b", "b_ref", required=True, help="Second arrangement")
@click.option("--loop", "loop_label", required=True, help="Loop whose face both charts share")
@click.option("--frame", "frame_ref", default=None, help="Shared frame, or an {a, b} pair (catalog frame of b by default)")
@click.pass_obj
@reports_errors
def compare_sides(state: CliState, a_ref: str, b_ref: str, loop_label: str, frame_ref: Optional[str]):
    """Which side of the shared face each chart occupies"""
    arr_a = load_arrangement(a_ref, state.tolerances)
    arr_b = load_arrangement(b_ref, state.tolerances)
    frame = load_frame(frame_ref, b_ref)
    if isinstance(frame, FramePairSchema):
        frame = (frame.a, frame.b)
    result = compare_face_sides(arr_a, arr_b, frame, loop_label, state.tolerances)
    emit(state, result, result.verdict.value)


@cli.command("distance")
@click.option("--x", "x_ref", required=True, help="Lengths of the first point")
@click.option("--y", "y_ref", required=True, help="Lengths of the second point")
@click.option("--arr", required=True, help="Arrangement whose area form is used")
@click.pass_obj
@reports_errors
def distance_command(state: CliState, x_ref: str, y_ref: str, arr: str):
    """Hyperbolic distance between two unit-area surfaces"""
    arrangement = load_arrangement(arr, state.tolerances)
    form = area_form(arrangement)
    x = normalize(load_lengths(x_ref, arrangement), form)
    y = normalize(load_lengths(y_ref, arrangement), form)
    report = distance_report(x, y, state.tolerances)
    emit(state, report, f"{report.distance!r}")


@cli.command("simplex-check")
@click.option("--arr", required=True, help="Arrangement file or catalog:NAME")
@click.option("--deficits", default=None, help="Comma-separated deficits replacing the arrangement's")
@click.pass_obj
@reports_errors
def simplex_check(state: CliState, arr: str, deficits: Optional[str]):
    """Ideal simplex structure of the chart"""
    arrangement = apply_deficits(load_arrangement(arr, state.tolerances), deficits, state.tolerances)
    report = ideal_simplex_check(area_form(arrangement), state.tolerances)
    lines = [
        f"vertices {report.n_vertices}, facets {report.n_facets}",
        f"vertices per facet {report.vertices_per_facet}, facets per vertex {report.facets_per_vertex}",
        f"regularity residual {report.regularity_residual:.6g}, gram spread {report.gram_spread:.6g}",
    ]
    emit(state, report, "\n".join(lines))


@cli.command("orbit")
@click.option("--lengths", "lengths_ref", required=True, help="Six lengths over a..f")
@click.pass_obj
@reports_errors
def orbit_command(state: CliState, lengths_ref: str):
    """Dihedral orbit and canonical representative of an N=4 length vector"""
    lengths = parse_lengths(read_text(lengths_ref), D6_LABELS)
    vector = [lengths[label] for label in sorted(lengths)]
    report = orbit_report(vector, sorted(lengths))
    emit(state, report, f"canonical {report.canonical}\norbit size {report.orbit_size}")


# -------------------------------
# Catalog
# -------------------------------
@cli.group("catalog")
def catalog_group():
    """Frozen arrangements"""


@catalog_group.command("list")
@click.pass_obj
def catalog_list(state: CliState):
    catalog = default_catalog()
    rows = []
    for name in catalog.names():
        entry = catalog.entry(name)
        rows.append({"name": name, "loops": len(entry.loops), "reference": entry.reference,
                     "across": entry.across, "provenance": entry.provenance})
    emit(state, rows, "\n".join(
        f"{row['name']:<12} {row['provenance']}" + (f" [{row['reference']} across {row['across']}]" if row["reference"] else "")
        for row in rows))


@catalog_group.command("show")
@click.argument("name")
@click.pass_obj
@reports_errors
def catalog_show(state: CliState, name: str):
    catalog = default_catalog()
    entry = catalog.entry(name)
    if state.as_json:
        click.echo(json.dumps(entry.model_dump(mode="json", by_alias=True), indent=2))
    else:
        click.echo(serialize_arrangement(catalog.arrangement(name)), nl=False)


@catalog_group.command("verify")
@click.pass_obj
def catalog_verify(state: CliState):
    checks = default_catalog().verify_all(state.tolerances)
    emit(state, [check.model_dump(mode="json") for check in checks], "\n".join(
        f"{check.name:<12} {'ok' if check.passed else 'FAIL'}"
        + (f" {check.verdict} across {check.across}" if check.verdict else "")
        + ("" if check.passed else f" ({check.message})")
        for check in checks))
    if not all(check.passed for check in checks):
        click.get_current_context().exit(1)


if __name__ == "__main__":
    cli()
