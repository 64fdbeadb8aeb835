"""
Command Line Interface

motive-workbench ring | mult | decompose | poincare | verify | report

Exit codes: 0 success (all checks pass), 1 check failure or refused rewrite,
2 usage or parse error.
"""

import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click

from .chow_ring import ChowClass, CoefficientRing, GrassmannSpace, basis_name, hasse_diagram, render_hasse
from .config import VALID_FORMATS, create_workbench_config, set_workbench_config
from .correspondence import ProductClass
from .errors import ChainStepFailed, ExpressionSyntaxError, ExpressionTypeError, WorkbenchError
from .expression import evaluate, parse, render, render_value, tautological_context
from .rewriter import (
    FlagDescriptor,
    GroupDescriptor,
    decompose_chain,
    default_poincare_table,
    gcd_obstruction_report,
    gensb_expand,
    krull_schmidt_report,
    poincare_polynomial,
    relabel_severi_brauer,
)
from .sb2_verifier import run_algebra, run_all

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _caret_column(text: str, offset: int) -> int:
    """位元組位置轉成字元欄位"""
    return len(text.encode("utf-8")[:offset].decode("utf-8", errors="ignore"))


def _emit(obj: Dict[str, Any], payload: Any, text: str) -> None:
    if obj["format"] == "json":
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        click.echo(text)


def _int_list(values: Sequence[str]) -> List[int]:
    """接受重複選項與逗號分隔：--remove 1 --remove 2 或 --remove 1,2"""
    result = []
    for value in values:
        for piece in value.split(","):
            piece = piece.strip()
            if not piece:
                continue
            try:
                result.append(int(piece))
            except ValueError:
                raise click.BadParameter(f"不是整數: {piece!r}")
    return result


def _flag(series: Optional[str], rank: Optional[int], index: int, dims: Optional[str]) -> FlagDescriptor:
    if series is None or rank is None or dims is None:
        raise click.UsageError("需要 --series、--rank 與 --flag")
    try:
        return FlagDescriptor(GroupDescriptor(series, rank, index), tuple(_int_list([dims])))
    except ValueError as e:
        raise click.UsageError(str(e))


@click.group()
@click.option("--format", "output_format", type=click.Choice(VALID_FORMATS), default=None,
              help="輸出格式（預設取自設定檔）")
@click.option("--ring", "ring_text", default="Z", show_default=True, help="係數環: Z、Z/m 或 Q")
@click.option("--seed", type=int, default=None, help="verify algebra 隨機合成檢查的種子")
@click.option("--config", "config_file", type=click.Path(dir_okay=False), default=None, help="YAML 設定檔")
@click.option("--debug", is_flag=True, help="輸出除錯日誌")
@click.pass_context
def cli(ctx: click.Context, output_format: Optional[str], ring_text: str, seed: Optional[int],
        config_file: Optional[str], debug: bool) -> None:
    """Schubert calculus and motive decomposition workbench"""
    try:
        config = create_workbench_config(config_file)
    except (FileNotFoundError, ValueError) as e:
        raise click.UsageError(f"設定檔錯誤: {e}")
    set_workbench_config(config)

    logging.basicConfig(
        level=logging.DEBUG if debug or config.debug else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        ring = CoefficientRing.parse(ring_text)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--ring")
    logger.debug("config: %s", config)
    ctx.obj = {"config": config, "format": output_format or config.report_format, "ring": ring, "seed": seed}


@cli.command()
@click.argument("kind", type=click.Choice(["gr", "proj"]))
@click.argument("numbers", nargs=-1, type=int, required=True)
@click.option("--hasse", is_flag=True, help="印出 Hasse 圖")
@click.pass_obj
def ring(obj: Dict[str, Any], kind: str, numbers: Tuple[int, ...], hasse: bool) -> None:
    """Schubert basis of Gr(D, N) or of P^N"""
    expected = 2 if kind == "gr" else 1
    if len(numbers) != expected:
        raise click.UsageError(f"{kind} 需要 {expected} 個整數參數")
    try:
        space = GrassmannSpace(*numbers) if kind == "gr" else GrassmannSpace(1, numbers[0] + 1)
    except WorkbenchError as e:
        _fail(str(e))

    basis = [{"partition": list(lam), "name": basis_name(space, lam), "codimension": lam.weight}
             for lam in space.basis]
    payload: Dict[str, Any] = {"space": space.render(), "dimension": space.dimension, "basis": basis}
    lines = [f"{space.render()}: dimension {space.dimension}, {len(basis)} Schubert classes"]
    lines.extend(f"  {entry['name']} = Δ{space.basis[i].render()} (codim {entry['codimension']})"
                 for i, entry in enumerate(basis))
    if hasse:
        levels, edges = hasse_diagram(space)
        payload["hasse"] = {
            "levels": {str(codim): [basis_name(space, lam) for lam in members] for codim, members in levels.items()},
            "edges": [[basis_name(space, a), basis_name(space, b)] for a, b in edges],
        }
        lines = [render_hasse(space)]
    _emit(obj, payload, "\n".join(lines))


@cli.command()
@click.argument("expression")
@click.option("--space", "space_dims", type=(int, int), default=(2, 5), show_default=True,
              help="主空間 Gr(D, N)")
@click.option("--secondary", "secondary_dims", type=(int, int), default=(1, 5), show_default=True,
              help="第二個空間 Gr(D, N)，預設為 P^4")
@click.pass_obj
def mult(obj: Dict[str, Any], expression: str, space_dims: Tuple[int, int],
         secondary_dims: Tuple[int, int]) -> None:
    """Evaluate EXPRESSION in the Chow rings of the two spaces"""
    try:
        primary = GrassmannSpace(*space_dims)
        secondary = GrassmannSpace(*secondary_dims)
        node = parse(expression)
        value = evaluate(node, tautological_context(primary, secondary, obj["ring"]))
    except ExpressionSyntaxError as e:
        _fail(f"{e}\n  {expression}\n  {' ' * _caret_column(expression, e.offset)}^")
    except (ExpressionTypeError, WorkbenchError) as e:
        _fail(str(e))

    if isinstance(value, (ChowClass, ProductClass)):
        encoded: Any = value.to_json()
    else:
        encoded = str(value)
    payload = {"expression": render(node), "ring": obj["ring"].render(), "value": encoded,
               "rendered": render_value(value)}
    _emit(obj, payload, render_value(value))


@cli.command()
@click.option("--series", type=click.Choice(["A", "B", "C", "F4", "G2"]), default=None)
@click.option("--rank", type=int, default=None)
@click.option("--index", type=int, default=1, show_default=True, help="代數指數 ind(A)")
@click.option("--flag", "dims", default=None, help="維數，例如 1,2")
@click.option("--remove", "remove", multiple=True, help="依序移除的維數值")
@click.option("--relabel", is_flag=True, help="把 A 型單一維數旗寫成 SB(A)/SB_d(A)")
@click.option("--gensb", type=(int, int), default=None, help="展開 SB_D(A)（N D）")
@click.pass_obj
def decompose(obj: Dict[str, Any], series: Optional[str], rank: Optional[int], index: int, dims: Optional[str],
              remove: Tuple[str, ...], relabel: bool, gensb: Optional[Tuple[int, int]]) -> None:
    """Decompose a flag variety by removing dimensions, or expand SB_d(A)"""
    if gensb is not None:
        n, d = gensb
        try:
            expansion = gensb_expand(n, d, index if index != 1 else None)
        except (WorkbenchError, ValueError) as e:
            _fail(str(e))
        payload = {"gensb": [n, d], "result": expansion.to_json(), "rendered": expansion.render(),
                   "hypotheses": list(expansion.hypotheses)}
        text = "\n".join([expansion.render()] + [f"  assuming {h}" for h in expansion.hypotheses])
        _emit(obj, payload, text)
        return

    flag = _flag(series, rank, index, dims)
    order = _int_list(remove)
    try:
        result = decompose_chain(flag, order)
    except ChainStepFailed as e:
        _fail(str(e), EXIT_CHECK_FAILED)
    if relabel:
        result = relabel_severi_brauer(result)
    payload = {"group": flag.group.render(), "flag": flag.render(), "index": index, "removal_order": order,
               "result": result.to_json(), "rendered": result.render()}
    _emit(obj, payload, result.render())


@cli.command()
@click.option("--series", type=click.Choice(["A", "B", "C", "F4", "G2"]), default=None)
@click.option("--rank", type=int, default=None)
@click.option("--index", type=int, default=1, show_default=True)
@click.option("--flag", "dims", default=None)
@click.option("--order", "order", multiple=True, help="移除順序（維數值）")
@click.pass_obj
def poincare(obj: Dict[str, Any], series: Optional[str], rank: Optional[int], index: int, dims: Optional[str],
             order: Tuple[str, ...]) -> None:
    """Poincaré polynomial of a decomposition, compared with the flag's own"""
    flag = _flag(series, rank, index, dims)
    removal = _int_list(order)
    table = default_poincare_table()
    try:
        result = decompose_chain(flag, removal)
        polynomial = poincare_polynomial(result, table)
    except ChainStepFailed as e:
        _fail(str(e), EXIT_CHECK_FAILED)
    except WorkbenchError as e:
        _fail(str(e))

    reference = table[flag] if flag in table else None
    equal = reference is None or reference == polynomial
    payload = {
        "flag": flag.render(),
        "group": flag.group.render(),
        "removal_order": removal,
        "decomposition": result.render(),
        "poincare": polynomial.to_json(),
        "rendered": polynomial.render(),
        "reference": reference.render() if reference is not None else None,
        "equal": equal,
    }
    lines = [f"{flag.render()} → {result.render()}", f"P = {polynomial.render()}"]
    if reference is not None:
        lines.append(f"P({flag.render()}) = {reference.render()}: {'equal' if equal else 'DIFFERENT'}")
    _emit(obj, payload, "\n".join(lines))
    if not equal:
        sys.exit(EXIT_CHECK_FAILED)


@cli.command()
@click.argument("target", type=click.Choice(["sb2", "algebra"]))
@click.option("--modulus", type=int, default=None, help="對角線恆等式的模數（預設取自設定檔）")
@click.option("--timings", is_flag=True, help="記錄每個檢查的耗時")
@click.pass_obj
def verify(obj: Dict[str, Any], target: str, modulus: Optional[int], timings: bool) -> None:
    """Run the SB2 verification pipeline or the algebra oracles"""
    config = obj["config"]
    timings = timings or config.report_timings
    if target == "sb2":
        modulus = modulus if modulus is not None else config.default_modulus
        if modulus < 2:
            raise click.BadParameter("模數必須 ≥ 2", param_hint="--modulus")
        report = run_all(modulus=modulus, timings=timings)
    else:
        report = run_algebra(timings=timings, seed=obj["seed"])
    _emit(obj, report.to_json(), report.render_text())
    if not report.all_passed:
        for check in report.failed:
            logger.info("failed check: %s", check.check_id)
        sys.exit(EXIT_CHECK_FAILED)


@cli.command()
@click.argument("kind", type=click.Choice(["krull-schmidt", "gcd"]))
@click.option("--index", type=int, default=None, help="代數指數（krull-schmidt 預設 5，gcd 預設 4）")
@click.option("--dim", type=int, default=None, help="gcd 報告的維數 d（預設 2）；krull-schmidt 的秩 n（預設 4）")
@click.pass_obj
def report(obj: Dict[str, Any], kind: str, index: Optional[int], dim: Optional[int]) -> None:
    """Krull-Schmidt failure report or gcd obstruction report"""
    try:
        if kind == "krull-schmidt":
            result = krull_schmidt_report(n=dim or 4, ind=index or 5)
        else:
            result = gcd_obstruction_report(index or 4, dim or 2)
    except (WorkbenchError, ValueError) as e:
        _fail(str(e))
    _emit(obj, result.to_json(), result.render_text())


def main() -> None:
    cli(prog_name="motive-workbench")


if __name__ == "__main__":
    main()
