"""``unitedk`` command line.

Exit codes: 0 pass, 1 verification or comparison failure, 2 unreadable input,
3 not an involution, 4 inadmissible involution.
"""

from __future__ import annotations

import json
import sys

import click

from .abgroup import HomomorphismError
from .crtmod import (
    PERIOD,
    CRTModule,
    compare,
    fingerprint,
    shift,
    verify,
)
from .document import DocumentError, ModuleDocument, load_document, render_document
from .exactalg import IntMatrix
from .pconstruct import (
    BUILTIN_EXAMPLES,
    InadmissibleInvolutionError,
    InvolutiveGroup,
    NotAnInvolutionError,
    build_p,
    builtin_example,
    eigen_parts,
    involutive_group,
)
from .search import MAX_ORDER, PART_FILTERS, search

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_NOT_INVOLUTION, EXIT_INADMISSIBLE = range(5)

format_option = click.option("--format", "fmt", type=click.Choice(["text", "json"]),
                             default="text", show_default=True, help="Report format.")


class InputError(Exception):
    """Malformed command-line data; reported with exit code 2."""


def _emit_json(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=False))


def _load_doc(path: str) -> ModuleDocument:
    try:
        return load_document(path)
    except DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot read: {exc}") from None


def _load(path: str) -> CRTModule:
    return _load_doc(path).module


def _write(text: str, output: str | None) -> None:
    if output is None or output == "-":
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_ints(text: str, what: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None


def parse_orders(text: str) -> tuple[int, ...]:
    orders = _parse_ints(text, "orders")
    if any(d < 0 for d in orders):
        raise InputError("orders must be non-negative (0 stands for Z)")
    return tuple(orders)


def parse_matrix(text: str, size: int) -> IntMatrix:
    """Rows separated by ``;``, entries by ``,``."""
    rows = [_parse_ints(r, "matrix row") for r in text.split(";")] if text.strip() else []
    if size == 0 and rows == []:
        return IntMatrix.zeros(0, 0)
    if len(rows) != size or any(len(r) != size for r in rows):
        raise InputError(f"involution matrix must be {size}x{size}")
    return IntMatrix(rows, size, size)


def involution_from_text(orders_text: str, matrix_text: str) -> InvolutiveGroup:
    orders = parse_orders(orders_text)
    matrix = parse_matrix(matrix_text, len(orders))
    try:
        return involutive_group(orders, matrix)
    except HomomorphismError as exc:
        raise NotAnInvolutionError(f"not an involution: {exc}") from None


def resolve_fixture(text: str) -> InvolutiveGroup:
    """A built-in example name, or ``ORDERS|MATRIX``."""
    if text in BUILTIN_EXAMPLES:
        return builtin_example(text)
    if "|" not in text:
        raise InputError(f"unknown fixture {text!r}; use one of "
                         f"{', '.join(BUILTIN_EXAMPLES)} or ORDERS|MATRIX")
    orders, matrix = text.split("|", 1)
    return involution_from_text(orders, matrix)


def _guarded(fn):
    """Map library errors onto exit codes."""
    def run(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InputError as exc:
            _fail(EXIT_PARSE, str(exc))
        except NotAnInvolutionError as exc:
            _fail(EXIT_NOT_INVOLUTION, str(exc))
        except InadmissibleInvolutionError as exc:
            _fail(EXIT_INADMISSIBLE, str(exc))
    run.__name__, run.__doc__ = fn.__name__, fn.__doc__
    return run


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Verify, build and compare CRT-modules."""


@main.command("verify")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--strict/--no-strict", default=True, show_default=True,
              help="Also check the coefficient-table identities.")
@format_option
@_guarded
def verify_cmd(path, strict, fmt):
    """Check structure, CRT relations and acyclicity of a module document."""
    report = verify(_load(path), strict=strict)
    if fmt == "json":
        _emit_json(report.to_dict())
    else:
        if not report.passed:
            click.echo(report.format_text())
        click.echo(("PASS" if report.passed else "FAIL") + f": {len(report)} violation(s)")
    sys.exit(EXIT_OK if report.passed else EXIT_FAIL)


@main.command("build-p")
@click.option("--orders", help="Cyclic orders of G, e.g. 4,2,2 (0 means Z).")
@click.option("--involution", help="Matrix of alpha; rows split by ';', columns are images.")
@click.option("--builtin", type=click.Choice(sorted(BUILTIN_EXAMPLES)),
              help="Use a built-in group with involution.")
@click.option("--name", help="Name stored in the document.")
@click.option("-o", "--output", type=click.Path(dir_okay=False),
              help="Write the module document here ('-' for stdout).")
@format_option
@_guarded
def build_p_cmd(orders, involution, builtin, name, output, fmt):
    """Build P(G, alpha) from a group with involution."""
    if builtin is not None:
        if orders is not None or involution is not None:
            raise InputError("--builtin excludes --orders/--involution")
        I = builtin_example(builtin)
        name = name or builtin
    elif orders is not None and involution is not None:
        I = involution_from_text(orders, involution)
    else:
        raise InputError("give --builtin, or both --orders and --involution")
    plus, minus = eigen_parts(I)
    M = build_p(I)
    if output is not None:
        _write(render_document(M, name=name, provenance=f"P(G, alpha) for G = {I.G}"), output)
    if output == "-":
        return
    if fmt == "json":
        _emit_json({"G": list(I.G.orders), "plus": list(plus.group.orders),
                    "minus": list(minus.group.orders), "output": output})
    else:
        click.echo(f"G  = {I.G}")
        click.echo(f"G+ = {plus.group}")
        click.echo(f"G- = {minus.group}")
        if output is not None:
            click.echo(f"wrote {output}")


@main.command("compare")
@click.argument("left", type=click.Path(dir_okay=False))
@click.argument("right", type=click.Path(dir_okay=False))
@format_option
@_guarded
def compare_cmd(left, right, fmt):
    """Compare the degreewise fingerprints of two modules."""
    A, B = _load(left), _load(right)
    verdict = compare(A, B)
    if fmt == "json":
        _emit_json({
            "left": fingerprint(A).to_dict(), "right": fingerprint(B).to_dict(),
            "differs": {pc.part: list(pc.differing) for pc in verdict.parts},
            "verdict": verdict.summary,
        })
    else:
        click.echo(f"left: {left}")
        click.echo(fingerprint(A).format_table())
        click.echo(f"\nright: {right}")
        click.echo(fingerprint(B).format_table())
        click.echo("")
        click.echo(verdict.format_text())
    sys.exit(EXIT_FAIL if verdict.distinguishable else EXIT_OK)


def _demo_checks(left: InvolutiveGroup, right: InvolutiveGroup):
    A, B = build_p(left), build_p(right)
    fa, fb = fingerprint(A), fingerprint(B)
    checks = [
        ("left module passes strict verification", verify(A, strict=True).passed),
        ("right module passes strict verification", verify(B, strict=True).passed),
        (f"O-parts agree in all {PERIOD} degrees", fa.O == fb.O),
    ]
    same_o = fa.O == fb.O
    for fam in ("etaO", "xi"):
        zero = all(A.hom(fam, n).is_zero() and B.hom(fam, n).is_zero() for n in range(PERIOD))
        equal = same_o and all(A.matrix(fam, n) == B.matrix(fam, n) for n in range(PERIOD))
        checks.append((f"{fam} is zero on both O-parts and coincides slotwise", zero and equal))
    verdict = compare(A, B)
    u_diff = verdict.part("U").first_difference
    checks.append(("U-parts differ", u_diff is not None))
    return A, B, checks, verdict


@main.command("demo")
@click.option("--left", default="G-alpha", show_default=True,
              help="Built-in name or ORDERS|MATRIX.")
@click.option("--right", default="H-beta", show_default=True,
              help="Built-in name or ORDERS|MATRIX.")
@format_option
@_guarded
def demo_cmd(left, right, fmt):
    """Two acyclic modules with equal real parts and different complex parts."""
    A, B, checks, verdict = _demo_checks(resolve_fixture(left), resolve_fixture(right))
    ok = all(passed for _, passed in checks)
    if fmt == "json":
        _emit_json({"left": left, "right": right,
                    "checks": [{"check": c, "passed": p} for c, p in checks],
                    "left_fingerprint": fingerprint(A).to_dict(),
                    "right_fingerprint": fingerprint(B).to_dict(),
                    "passed": ok})
    else:
        click.echo(f"left:  P({left})")
        click.echo(fingerprint(A).format_table())
        click.echo(f"\nright: P({right})")
        click.echo(fingerprint(B).format_table())
        click.echo("")
        for c, p in checks:
            click.echo(f"[{'ok' if p else 'FAIL'}] {c}")
        click.echo(verdict.format_text())
        click.echo("result: " + ("real parts agree, complex parts differ" if ok
                                 else "claim not reproduced"))
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command("search")
@click.option("--max-order", type=click.IntRange(1, MAX_ORDER), default=16, show_default=True,
              help="Largest group order scanned.")
@click.option("--part", type=click.Choice(PART_FILTERS), default="U", show_default=True,
              help="Part that must differ inside a bucket.")
@format_option
def search_cmd(max_order, part, fmt):
    """Scan small groups with involution for equal real parts."""
    result = search(max_order, part)
    if fmt == "json":
        _emit_json(result.to_dict())
    else:
        click.echo(result.format_text(), nl=False)


@main.command("shift", context_settings={"ignore_unknown_options": True})
@click.argument("path", type=click.Path(dir_okay=False))
@click.argument("k", type=int)
@click.option("-o", "--output", type=click.Path(dir_okay=False),
              help="Output document (default stdout).")
@_guarded
def shift_cmd(path, k, output):
    """Shift a module by K degrees (K may be negative)."""
    doc = _load_doc(path)
    _write(render_document(shift(doc.module, k), doc.name, doc.provenance), output)


@main.command("fingerprint")
@click.argument("path", type=click.Path(dir_okay=False))
@format_option
@_guarded
def fingerprint_cmd(path, fmt):
    """Print the degreewise invariant factors of a module."""
    fp = fingerprint(_load(path))
    if fmt == "json":
        _emit_json(fp.to_dict())
    else:
        click.echo(fp.format_table())


if __name__ == "__main__":  # pragma: no cover
    main()
