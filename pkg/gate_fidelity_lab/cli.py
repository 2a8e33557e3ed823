"""CLI interface for gate-fidelity-lab.

Subcommands:

1. ``gate-fidelity-lab run --config exp.json`` runs an experiment config:
   estimates, resource tables or a relevance-distribution dump, with
   ``report.json`` / ``settings.csv`` written to ``--out``.

2. ``gate-fidelity-lab gates`` / ``noise`` list the named gates and noise
   constructors a config may use.

3. ``gate-fidelity-lab examples [ID]`` lists the curated configs or prints
   one of them, ready to save and run.
"""

import json
import logging
import sys
from typing import Optional

import click

from . import __version__
from .channels import NOISE_MODELS
from .config import load_config
from .errors import ConfigError
from .examples import EXAMPLES, get_example
from .experiment.runner import EXIT_INFEASIBLE, EXIT_MALFORMED, run_experiment
from .gates import NAMED_GATES
from .schemas import MODES

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _colorize(text: str, color: str) -> str:
    """Apply ANSI color codes.  Returns plain text when stdout is not a TTY."""
    colors = {
        "red": "\033[91m",
        "green": "\033[92m",
        "yellow": "\033[93m",
        "blue": "\033[94m",
        "reset": "\033[0m",
        "bold": "\033[1m",
    }
    if not sys.stdout.isatty():
        return text
    return f"{colors.get(color, '')}{text}{colors['reset']}"


def configure_logging(verbosity: int) -> None:
    """-v for INFO, -vv for DEBUG; WARNING otherwise.  Logs go to stderr."""
    level = _LOG_LEVELS[min(verbosity, len(_LOG_LEVELS) - 1)]
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


@click.group()
@click.version_option(version=__version__)
@click.option("-v", "--verbose", count=True, help="Increase log verbosity (-v INFO, -vv DEBUG)")
def main(verbose: int):
    """Estimate the average fidelity of quantum gates by Monte Carlo sampling.

    \b
    Usage:
      gate-fidelity-lab run --config exp.json --out results/
      gate-fidelity-lab gates              List named gates
      gate-fidelity-lab noise              List noise constructors
      gate-fidelity-lab examples [ID]      List or print curated configs
    """
    configure_logging(verbose)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Experiment config (JSON)")
@click.option("--seed", type=int, default=None, help="Override the config seed")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for report.json and settings.csv")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker threads; results do not depend on it")
@click.option("--mode", type=click.Choice(MODES), default=None, help="Override the config mode")
@click.option("--json-output", is_flag=True, help="Print the report as JSON instead of a summary")
def run(config_path: str, seed: Optional[int], out_dir: Optional[str], threads: int,
        mode: Optional[str], json_output: bool):
    """Run the experiment described by a config file.

    \b
    Exit codes:
      0  success (statistical checks may warn)
      1  malformed config
      2  size beyond a simulation cap
      3  internal self-check failure, or a deterministic check failed

    \b
    Examples:
      gate-fidelity-lab run --config h_depol.json --out results/
      gate-fidelity-lab run --config h_depol.json --seed 3 --threads 8
      gate-fidelity-lab run --config h_depol.json --mode distribution-dump --out dump/
    """
    try:
        data = load_config(config_path)
    except ConfigError as exc:
        for error in exc.errors:
            click.echo(_colorize(f"Error: {error}", "red"), err=True)
        sys.exit(EXIT_INFEASIBLE if exc.infeasible else EXIT_MALFORMED)

    exit_code = run_experiment(
        data,
        overrides={"seed": seed, "mode": mode},
        out_dir=out_dir,
        threads=threads,
        json_output=json_output,
    )
    sys.exit(exit_code)


@main.command()
def gates():
    """List the named gates a config may use."""
    click.echo(_colorize("Named gates:", "bold"))
    click.echo()
    for name, (description, min_qubits, _) in NAMED_GATES.items():
        click.echo(f"  {_colorize(name, 'blue'):<18}  n >= {min_qubits}  {description}")
    click.echo()
    click.echo('Explicit gates: {"unitary": [[[re, im], ...], ...]} or {"random": "unitary"|"clifford", "seed": k}')


@main.command()
def noise():
    """List the noise constructors a config may use."""
    click.echo(_colorize("Noise constructors:", "bold"))
    click.echo()
    for name, description in NOISE_MODELS.items():
        click.echo(f"  {_colorize(name, 'blue'):<26}  {description}")
    click.echo()
    click.echo("A list of constructors is applied in order after the gate.")


@main.command()
@click.argument("example_id", required=False, default=None, metavar="[ID]")
def examples(example_id: Optional[str]):
    """List the curated example configs, or print one as JSON.

    \b
    Usage:
      gate-fidelity-lab examples                     List all examples
      gate-fidelity-lab examples cnot-exhaustive     Print its config
    """
    if example_id is None:
        click.echo(_colorize("Example configs:", "bold"))
        click.echo()
        for example in EXAMPLES:
            click.echo(f"  {_colorize(example['id'], 'blue'):<40}  {example['name']}")
        click.echo()
        click.echo(f"Use '{_colorize('gate-fidelity-lab examples <id>', 'bold')}' to print one.")
        return

    try:
        example = get_example(example_id)
    except KeyError:
        click.echo(
            _colorize(f"Unknown example '{example_id}'. ", "red")
            + f"Available examples: {', '.join(e['id'] for e in EXAMPLES)}",
            err=True,
        )
        sys.exit(1)
    click.echo(json.dumps(example["config"], indent=2))


if __name__ == "__main__":
    main()
