"""Operator command line: preprocess, validate, recommend, serve.

Every parameter is settable by flag or STORYREC_* environment variable
(flags win). Exit codes: 0 success, 1 input error, 2 internal error.
"""

from __future__ import annotations

import json
import logging
import sys
import time
from pathlib import Path

import click

from .config import EngineParams
from .dataset import DatasetError, dataset_stats, load_movielens
from .engine import Engine, EngineError, validate_model
from .report import render_story_figure, render_validation_figures
from .session import create_session
from .snapshot import SnapshotError, load_snapshot, save_snapshot
from .synth import generate_dataset, write_movielens_dir

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 1
EXIT_INTERNAL_ERROR = 2


def _param_options(fn):
    """Engine-parameter flags shared by the commands that build or load a model."""
    options = [
        click.option("--k", type=int, default=None, envvar="STORYREC_K", help="truncation rank"),
        click.option("--tau-plus", type=float, default=None, envvar="STORYREC_TAU_PLUS"),
        click.option("--tau-minus", type=float, default=None, envvar="STORYREC_TAU_MINUS"),
        click.option("--tau-r", type=float, default=None, envvar="STORYREC_TAU_R"),
        click.option("--wc", type=float, default=None, envvar="STORYREC_WC"),
        click.option("--w-plus", type=float, default=None, envvar="STORYREC_W_PLUS"),
        click.option("--w-o", type=float, default=None, envvar="STORYREC_W_O"),
        click.option("--w-theta", type=float, default=None, envvar="STORYREC_W_THETA"),
        click.option("--w-int", type=float, default=None, envvar="STORYREC_W_INT"),
        click.option("--tau-v", type=float, default=None, envvar="STORYREC_TAU_V"),
        click.option("--tau-s", type=float, default=None, envvar="STORYREC_TAU_S"),
        click.option("--rho", type=float, default=None, envvar="STORYREC_RHO"),
        click.option("--T", "story_length", type=int, default=None, envvar="STORYREC_T"),
        click.option("--max-dims", type=int, default=None, envvar="STORYREC_MAX_DIMS"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _collect_params(base: EngineParams | None = None, **kwargs) -> EngineParams:
    base = base or EngineParams()
    return base.with_overrides(
        k=kwargs.get("k"),
        tau_plus=kwargs.get("tau_plus"),
        tau_minus=kwargs.get("tau_minus"),
        tau_r=kwargs.get("tau_r"),
        w_c=kwargs.get("wc"),
        w_plus=kwargs.get("w_plus"),
        w_o=kwargs.get("w_o"),
        w_theta=kwargs.get("w_theta"),
        w_int=kwargs.get("w_int"),
        tau_v=kwargs.get("tau_v"),
        tau_s=kwargs.get("tau_s"),
        rho=kwargs.get("rho"),
        story_length=kwargs.get("story_length"),
        max_dims=kwargs.get("max_dims"),
    )


def _echo_config(params: EngineParams, extra: dict) -> None:
    click.echo("effective configuration:")
    for key, value in {**params.to_dict(), **extra}.items():
        click.echo(f"  {key} = {value}")


@click.group()
@click.option("-v", "--verbose", is_flag=True, envvar="STORYREC_VERBOSE")
def main(verbose: bool) -> None:
    """Latent-factor movie recommendation engine with storytelling."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.option(
    "--data-dir",
    type=click.Path(path_type=Path),
    required=True,
    envvar="STORYREC_DATA_DIR",
    help="MovieLens 100K-layout directory",
)
@click.option(
    "--snapshot",
    type=click.Path(path_type=Path),
    required=True,
    envvar="STORYREC_SNAPSHOT",
)
@_param_options
def preprocess(data_dir: Path, snapshot: Path, **kwargs) -> None:
    """Load ratings, build the latent space, and write a snapshot."""
    params = _collect_params(**kwargs)
    _echo_config(params, {"data_dir": data_dir, "snapshot": snapshot})
    t0 = time.monotonic()
    ds = load_movielens(data_dir)
    stats = dataset_stats(ds)
    click.echo(
        f"loaded {stats.n_users} users, {stats.n_movies} movies, "
        f"{stats.n_ratings} ratings (sparsity {stats.sparsity:.4f})"
    )
    engine = Engine.build(ds, params)
    save_snapshot(engine, snapshot)
    click.echo(f"snapshot written to {snapshot} in {time.monotonic() - t0:.2f}s")


@main.command()
@click.option(
    "--snapshot",
    type=click.Path(path_type=Path),
    required=True,
    envvar="STORYREC_SNAPSHOT",
)
@click.option(
    "--report-dir",
    type=click.Path(path_type=Path),
    default=Path("validation"),
    envvar="STORYREC_REPORT_DIR",
)
@click.option("--no-figures", is_flag=True, help="skip figure rendering")
@_param_options
def validate(snapshot: Path, report_dir: Path, no_figures: bool, **kwargs) -> None:
    """Per-user degree statistics on best dimensions (CSV + figures)."""
    params = _collect_params(**kwargs)
    engine = _load_engine(snapshot, params)
    _echo_config(engine.params, {"snapshot": snapshot, "report_dir": report_dir})
    t0 = time.monotonic()
    report = validate_model(engine)
    report_dir = Path(report_dir)
    report_dir.mkdir(parents=True, exist_ok=True)
    csv_path = report_dir / "validation.csv"
    report.write_csv(csv_path)
    click.echo(report.summary_text())
    click.echo(f"rows written to {csv_path}")
    if not no_figures:
        for fig_path in render_validation_figures(report, report_dir):
            click.echo(f"figure written to {fig_path}")
    click.echo(f"validation finished in {time.monotonic() - t0:.2f}s")


@main.command()
@click.option(
    "--snapshot",
    type=click.Path(path_type=Path),
    required=True,
    envvar="STORYREC_SNAPSHOT",
)
@click.option("--user", "user_id", type=int, required=True, envvar="STORYREC_USER")
@click.option("--stories", type=int, default=1, envvar="STORYREC_STORIES")
@click.option("--seed", type=int, default=0, envvar="STORYREC_SEED")
@click.option("--f", "f", type=float, default=None, envvar="STORYREC_F")
@click.option("--t", "t", type=float, default=None, envvar="STORYREC_T_PREF")
@click.option("--new-user", is_flag=True, help="allow ids absent from the dataset")
@click.option(
    "--figures-dir",
    type=click.Path(path_type=Path),
    default=None,
    envvar="STORYREC_FIGURES_DIR",
    help="also render one figure per story",
)
@click.option("--out", type=click.Path(path_type=Path), default=None, envvar="STORYREC_OUT")
@_param_options
def recommend(
    snapshot: Path,
    user_id: int,
    stories: int,
    seed: int,
    f: float | None,
    t: float | None,
    new_user: bool,
    figures_dir: Path | None,
    out: Path | None,
    **kwargs,
) -> None:
    """Generate stories headlessly as JSON lines (one story per line)."""
    params = _collect_params(**kwargs)
    engine = _load_engine(snapshot, params)
    _echo_config(engine.params, {"snapshot": snapshot, "user": user_id, "seed": seed})
    session = create_session(engine, user_id, seed, strict=not new_user)
    if f is not None or t is not None:
        session.set_preferences(
            f if f is not None else session.f, t if t is not None else session.t
        )
    sink = out.open("w") if out else sys.stdout
    try:
        for n in range(stories):
            story = session.next_story()
            sink.write(json.dumps(story.to_dict(), sort_keys=True) + "\n")
            if figures_dir is not None:
                fig_path = Path(figures_dir) / f"story_{n:03d}.png"
                render_story_figure(story, fig_path)
    finally:
        if out:
            sink.close()
    if out:
        click.echo(f"{stories} stories written to {out}")


@main.command()
@click.option(
    "--snapshot",
    type=click.Path(path_type=Path),
    required=True,
    envvar="STORYREC_SNAPSHOT",
)
@click.option("--listen", default="127.0.0.1:8000", envvar="STORYREC_LISTEN")
@click.option("--lenient-users", is_flag=True, envvar="STORYREC_LENIENT_USERS")
@_param_options
def serve(snapshot: Path, listen: str, lenient_users: bool, **kwargs) -> None:
    """Run the HTTP/JSON service from a snapshot."""
    import signal
    import threading

    import uvicorn

    from .service import create_app

    params = _collect_params(**kwargs)
    engine = _load_engine(snapshot, params)
    _echo_config(engine.params, {"snapshot": snapshot, "listen": listen})
    host, _, port = listen.partition(":")
    app = create_app(engine, strict_users=not lenient_users)

    config = uvicorn.Config(app, host=host or "127.0.0.1", port=int(port or 8000))
    server = uvicorn.Server(config)
    # Run the server off the main thread so we own signal handling and can
    # exit 0 on SIGTERM/SIGINT after a graceful shutdown.
    worker = threading.Thread(target=server.run, daemon=True)
    stop = threading.Event()
    signal.signal(signal.SIGTERM, lambda *_: stop.set())
    signal.signal(signal.SIGINT, lambda *_: stop.set())
    worker.start()
    while worker.is_alive() and not stop.wait(timeout=0.2):
        pass
    if worker.is_alive():
        click.echo("shutting down")
        server.should_exit = True
        worker.join(timeout=10)


@main.command("make-dataset")
@click.option("--out", type=click.Path(path_type=Path), required=True, envvar="STORYREC_OUT")
@click.option("--users", type=int, default=943)
@click.option("--movies", type=int, default=1682)
@click.option("--ratings", type=int, default=100_000)
@click.option("--seed", type=int, default=7, envvar="STORYREC_SEED")
def make_dataset(out: Path, users: int, movies: int, ratings: int, seed: int) -> None:
    """Write a synthetic MovieLens-layout dataset (fixture / demo corpus)."""
    ds = generate_dataset(users, movies, ratings, seed)
    write_movielens_dir(ds, out)
    click.echo(f"synthetic dataset written to {out}")


def _load_engine(snapshot: Path, params: EngineParams) -> Engine:
    if not Path(snapshot).is_file():
        raise SnapshotError(f"missing snapshot {snapshot}; run preprocess first")
    return load_snapshot(snapshot, params_override=params)


def run() -> None:
    """Entry point with the documented exit-code contract."""
    try:
        main(standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(130)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_INPUT_ERROR)
    except (DatasetError, SnapshotError, EngineError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    except Exception as exc:  # pragma: no cover - unexpected failure path
        logger.exception("internal error")
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(EXIT_INTERNAL_ERROR)


if __name__ == "__main__":
    run()
