"""
Command-line front end.

Settings are resolved per option as: command-line flag, else config-file
key, else environment (BP_SEED, BP_WORKERS, BP_CONFIG_FILE), else built-in
default. Exit codes: 0 success, 1 numeric or per-algorithm failure,
2 usage or parameter error.
"""
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, Optional
import json
import logging

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table
from typing_extensions import Annotated

from app.adapters.base_measure_adapter import MixedBase
from app.app_env import app_env
from app.errors import BetaProcessError, ParameterError
from app.logger import configure_logging
from app.models.bench_models import BenchConfig, comparison_specs
from app.models.measure_models import BetaProcessParams
from app.models.sampler_models import Algorithm, SamplerSpec
from app.sampler_manager import get_sampler
from app.services.beta_bernoulli_service import bep_draw, posterior_update, sample_posterior
from app.services.benchmark_service import build_bench_config, empirical_moments, exact_moments, run_comparison
from app.services.config_service import load_config_file, parse_floats, spec_from_config, spec_to_config
from app.services.measure_service import path_to_dict, paths_to_frame, paths_to_json, piecewise_linear_base, uniform_base
from app.services.report_service import moments_frame, render_report, report_table, write_text
from app.settings import ALGORITHM_SALTS, COMPARISON_SETTINGS, DEFAULT_CONCENTRATION, DEFAULT_GRID, DEFAULT_MASS, DEFAULT_PATHS
from app.utils.randgen import derive_substream, make_stream

logger = logging.getLogger(__name__)

app = typer.Typer(
    help="Simulate beta-process paths, run the error-metric benchmark and the conjugate posterior demo.",
    add_completion=False,
    no_args_is_help=True,
)
err_console = Console(stderr=True)


class OutputFormat(str, Enum):
    csv = "csv"
    json = "json"
    md = "md"


# --- Shared options --------------------------------------------------------

AlgOpt = Annotated[Optional[Algorithm], typer.Option("--alg", help="Construction to run.", case_sensitive=False)]
COpt = Annotated[Optional[float], typer.Option("--c", help="Concentration c (default 2).")]
MassOpt = Annotated[Optional[float], typer.Option("--mass", help="Base mass gamma (default 1).")]
NOpt = Annotated[Optional[int], typer.Option("--n", help="Atom count n (pc, as, lee) or DLS terms per cell.")]
RoundsOpt = Annotated[Optional[int], typer.Option("--rounds", help="Stick-breaking rounds R (stick, prep5, prep6).")]
JumpsOpt = Annotated[Optional[int], typer.Option("--jumps", help="Ferguson-Klass jump count N (fk).")]
EpsOpt = Annotated[Optional[float], typer.Option("--eps", help="Epsilon in (0, 1) (leekim, lee).")]
PartitionsOpt = Annotated[Optional[int], typer.Option("--partitions", help="DLS cell count m (equal base mass).")]
PathsOpt = Annotated[Optional[int], typer.Option("--paths", help="Number of sample paths.")]
GridOpt = Annotated[Optional[str], typer.Option("--grid", help="Comma-separated evaluation points.")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Master seed (default BP_SEED).")]
OutOpt = Annotated[Optional[Path], typer.Option("--out", help="Output file; stdout when omitted.")]
FormatOpt = Annotated[Optional[OutputFormat], typer.Option("--format", help="Output format.", case_sensitive=False)]
WorkersOpt = Annotated[Optional[int], typer.Option("--workers", help="Worker threads (default BP_WORKERS).")]
ConfigOpt = Annotated[Optional[Path], typer.Option("--config", help="Key-value config file (default BP_CONFIG_FILE).")]
BaseCdfOpt = Annotated[Optional[Path], typer.Option("--base-cdf", help="Two-column x,cdf CSV for a piecewise-linear base.")]


@app.callback()
def main(
    log_level: Annotated[Optional[str], typer.Option("--log-level", help="Logging level (default BP_LOG_LEVEL).")] = None,
):
    try:
        configure_logging(log_level or app_env.BP_LOG_LEVEL)
    except ValueError:
        err_console.print(f"[red]error:[/red] unknown log level {escape(str(log_level))}")
        raise typer.Exit(code=2)


@contextmanager
def _cli_errors() -> Iterator[None]:
    try:
        yield
    except ParameterError as e:
        err_console.print(f"[red]error:[/red] {escape(str(e))}")
        raise typer.Exit(code=2)
    except BetaProcessError as e:
        err_console.print(f"[red]numeric failure:[/red] {escape(str(e))}")
        raise typer.Exit(code=1)


# --- Setting resolution ------------------------------------------------------

def _resolve(flag: Any, config: Dict[str, str], key: str, cast: Callable[[str], Any], default: Any = None) -> Any:
    if flag is not None:
        return flag
    raw = config.get(key)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise ParameterError(f"config key {key!r}: cannot read {raw!r}") from None


def _config(path: Optional[Path]) -> Dict[str, str]:
    return load_config_file(path or app_env.BP_CONFIG_FILE)


def _prior(c: float, mass: float, base_cdf: Optional[str]) -> BetaProcessParams:
    base = piecewise_linear_base(base_cdf, mass) if base_cdf else uniform_base(mass)
    try:
        return BetaProcessParams(c=c, base=base)
    except ValidationError as e:
        raise ParameterError(f"invalid prior: {e.errors()[0]['msg']}") from e


def _prior_from(config: Dict[str, str], c: Optional[float], mass: Optional[float], base_cdf: Optional[Path]) -> BetaProcessParams:
    return _prior(
        _resolve(c, config, "c", float, DEFAULT_CONCENTRATION),
        _resolve(mass, config, "mass", float, DEFAULT_MASS),
        _resolve(str(base_cdf) if base_cdf else None, config, "base_cdf", str),
    )


def _sampler_settings(config: Dict[str, str], n, rounds, jumps, eps, partitions) -> Dict[str, Any]:
    """Config entries with the sampler flags laid over them."""
    flags = {"n": n, "rounds": rounds, "jumps": jumps, "eps": eps, "partitions": partitions}
    return {**config, **{key: value for key, value in flags.items() if value is not None}}


def _spec_for(alg: Algorithm, settings: Dict[str, Any], table_defaults: bool) -> SamplerSpec:
    defaults = COMPARISON_SETTINGS.get(alg.value, {}) if table_defaults else None
    return spec_from_config({**settings, "alg": alg}, defaults=defaults)


def _algorithm(alg: Optional[Algorithm], config: Dict[str, str], default: Optional[Algorithm] = None) -> Algorithm:
    alg = _resolve(alg, config, "alg", lambda s: Algorithm(s.lower()), default)
    if alg is None:
        raise ParameterError("no algorithm given; pass --alg or set alg in the config file")
    return alg


def _grid(flag: Optional[str], config: Dict[str, str]) -> tuple:
    raw = _resolve(flag, config, "grid", str)
    return DEFAULT_GRID if raw is None else parse_floats(raw, "grid")


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=not text.endswith("\n"))
    else:
        write_text(text, out)


# --- Commands ------------------------------------------------------------------

@app.command("sample")
def cmd_sample(
    alg: AlgOpt = None,
    c: COpt = None,
    mass: MassOpt = None,
    n: NOpt = None,
    rounds: RoundsOpt = None,
    jumps: JumpsOpt = None,
    eps: EpsOpt = None,
    partitions: PartitionsOpt = None,
    paths: PathsOpt = None,
    seed: SeedOpt = None,
    out: OutOpt = None,
    fmt: FormatOpt = None,
    config: ConfigOpt = None,
    base_cdf: BaseCdfOpt = None,
):
    """Sample one or more paths and write them as JSON ({"atoms": [...]}) or CSV (loc,w)."""
    with _cli_errors():
        cfg = _config(config)
        algorithm = _algorithm(alg, cfg)
        spec = _spec_for(algorithm, _sampler_settings(cfg, n, rounds, jumps, eps, partitions), table_defaults=False)
        params = _prior_from(cfg, c, mass, base_cdf)
        count = _resolve(paths, cfg, "paths", int, 1)
        if count < 1:
            raise ParameterError(f"--paths must be at least 1, got {count}")
        master = _resolve(seed, cfg, "seed", int, app_env.BP_SEED)
        out = _resolve(out, cfg, "out", Path)
        fmt = _resolve(fmt, cfg, "format", OutputFormat, OutputFormat.json)
        if fmt is OutputFormat.md:
            raise ParameterError("paths are written as json or csv")

        sampler = get_sampler(spec)
        salt = ALGORITHM_SALTS[algorithm.value]
        sampled = [sampler.sample(params, derive_substream(master, r, salt=salt)) for r in range(count)]
        logger.info(f"{algorithm.value} ({spec.describe()}): {[len(p) for p in sampled]} atoms")
        if fmt is OutputFormat.json:
            _emit(paths_to_json(sampled) + "\n", out)
        else:
            _emit(paths_to_frame(sampled).to_csv(index=False, float_format="%.17g"), out)


@app.command("bench")
def cmd_bench(
    algorithms: Annotated[Optional[str], typer.Option("--algorithms", help="Comma-separated algorithms (default: the five-row comparison).")] = None,
    c: COpt = None,
    mass: MassOpt = None,
    n: NOpt = None,
    rounds: RoundsOpt = None,
    jumps: JumpsOpt = None,
    eps: EpsOpt = None,
    partitions: PartitionsOpt = None,
    paths: PathsOpt = None,
    grid: GridOpt = None,
    seed: SeedOpt = None,
    out: OutOpt = None,
    fmt: FormatOpt = None,
    workers: WorkersOpt = None,
    config: ConfigOpt = None,
    base_cdf: BaseCdfOpt = None,
):
    """Run the error-metric comparison and write the report. Exits 1 if any algorithm failed."""
    with _cli_errors():
        cfg = _config(config)
        settings = _sampler_settings(cfg, n, rounds, jumps, eps, partitions)
        names = _resolve(algorithms, cfg, "algorithms", str)
        if names is None:
            specs = tuple(
                _spec_for(spec.algorithm, settings, table_defaults=True) for spec in comparison_specs()
            )
        else:
            try:
                algs = [Algorithm(name.strip().lower()) for name in names.split(",") if name.strip()]
            except ValueError as e:
                raise ParameterError(str(e)) from None
            specs = tuple(_spec_for(a, settings, table_defaults=True) for a in algs)

        params = _prior_from(cfg, c, mass, base_cdf)
        bench_cfg: BenchConfig = build_bench_config(
            c=params.c,
            base=params.base,
            grid=_grid(grid, cfg),
            paths=_resolve(paths, cfg, "paths", int, DEFAULT_PATHS),
            master_seed=_resolve(seed, cfg, "seed", int, app_env.BP_SEED),
            samplers=specs,
            workers=_resolve(workers, cfg, "workers", int, app_env.BP_WORKERS),
        )
        fmt = _resolve(fmt, cfg, "format", OutputFormat, OutputFormat.csv)
        out = _resolve(out, cfg, "out", Path)

        report = run_comparison(bench_cfg)
        err_console.print(report_table(report))
        _emit(render_report(report, fmt.value), out)
        if not report.all_ok:
            failed = ", ".join(row.algorithm for row in report.rows if not row.ok)
            err_console.print(f"[red]failed:[/red] {escape(failed)}")
            raise typer.Exit(code=1)


@app.command("moments")
def cmd_moments(
    alg: AlgOpt = None,
    c: COpt = None,
    mass: MassOpt = None,
    n: NOpt = None,
    rounds: RoundsOpt = None,
    jumps: JumpsOpt = None,
    eps: EpsOpt = None,
    partitions: PartitionsOpt = None,
    paths: PathsOpt = None,
    grid: GridOpt = None,
    seed: SeedOpt = None,
    out: OutOpt = None,
    workers: WorkersOpt = None,
    config: ConfigOpt = None,
    base_cdf: BaseCdfOpt = None,
):
    """Write per-grid-point x,mean,sd,exact_mean,exact_sd as CSV for plotting."""
    with _cli_errors():
        cfg = _config(config)
        algorithm = _algorithm(alg, cfg)
        spec = _spec_for(algorithm, _sampler_settings(cfg, n, rounds, jumps, eps, partitions), table_defaults=True)
        params = _prior_from(cfg, c, mass, base_cdf)
        bench_cfg = build_bench_config(
            c=params.c,
            base=params.base,
            grid=_grid(grid, cfg),
            paths=_resolve(paths, cfg, "paths", int, DEFAULT_PATHS),
            master_seed=_resolve(seed, cfg, "seed", int, app_env.BP_SEED),
            samplers=(spec,),
            workers=_resolve(workers, cfg, "workers", int, app_env.BP_WORKERS),
        )
        moments = empirical_moments(spec, bench_cfg)
        exact = exact_moments(bench_cfg.base, bench_cfg.c, bench_cfg.grid)
        _emit(moments_frame(moments, exact).to_csv(index=False, float_format="%.6f"), _resolve(out, cfg, "out", Path))


def _atom_table(base: MixedBase) -> Table:
    table = Table(title="Observed atoms of the posterior base")
    table.add_column("location", justify="right")
    table.add_column("count", justify="right")
    table.add_column("mass", justify="right")
    for loc, k, q in zip(base.atom_locations, base.atom_counts, base.atom_masses):
        table.add_row(f"{loc:.6f}", str(k), f"{q:.6f}")
    return table


@app.command("posterior-demo")
def cmd_posterior_demo(
    alg: AlgOpt = None,
    c: COpt = None,
    mass: MassOpt = None,
    n: NOpt = None,
    rounds: RoundsOpt = None,
    jumps: JumpsOpt = None,
    eps: EpsOpt = None,
    partitions: PartitionsOpt = None,
    m: Annotated[Optional[int], typer.Option("--m", help="Number of Bernoulli-process draws.")] = None,
    seed: SeedOpt = None,
    out: OutOpt = None,
    config: ConfigOpt = None,
    base_cdf: BaseCdfOpt = None,
):
    """
    Sample a prior path, draw m Bernoulli-process observations from it, and
    report the conjugate posterior and one posterior path as JSON.
    """
    with _cli_errors():
        cfg = _config(config)
        algorithm = _algorithm(alg, cfg, default=Algorithm.AS)
        settings = _sampler_settings(cfg, n, rounds, jumps, eps, partitions)
        spec = _spec_for(algorithm, settings, table_defaults=True)
        prior = _prior_from(cfg, c, mass, base_cdf)
        draws_count = _resolve(m, cfg, "m", int, 1)
        if draws_count < 0:
            raise ParameterError(f"--m must be nonnegative, got {draws_count}")
        posterior_n = _resolve(n, cfg, "n", int) or COMPARISON_SETTINGS["as"]["n"]

        stream = make_stream(_resolve(seed, cfg, "seed", int, app_env.BP_SEED))
        prior_path = get_sampler(spec).sample(prior, stream)
        draws = [bep_draw(prior_path, stream) for _ in range(draws_count)]
        post = posterior_update(prior, draws)
        post_path = sample_posterior(post, posterior_n, stream)

        err_console.print(f"c* = {post.c:g}   posterior base mass = {post.base.mass:.12g}")
        if isinstance(post.base, MixedBase):
            err_console.print(_atom_table(post.base))
        else:
            err_console.print("no observations: prior returned unchanged")

        document = {
            "prior": prior.model_dump(mode="json"),
            "sampler": spec_to_config(spec),
            "m": draws_count,
            "draws": [list(d.locations) for d in draws],
            "c_star": post.c,
            "posterior_base_mass": post.base.mass,
            "posterior": post.model_dump(mode="json"),
            "prior_path": path_to_dict(prior_path),
            "posterior_path": path_to_dict(post_path),
        }
        _emit(json.dumps(document, indent=2) + "\n", _resolve(out, cfg, "out", Path))
