"""
Command-line entry point: threshold, sweep, rents, rent-compression, simulate, attack, matrix, serve

Every command that writes files also writes a manifest.json beside them; output
echoed to stdout gets its manifest on stderr.
Exit codes: 0 success, 1 input error, 2 invariant violation during a run.
"""
import logging
import sys
from dataclasses import replace
from pathlib import Path

import click
import pandas as pd

from eventperp.app.services import (
    AdversaryService,
    ConfigService,
    CostBenefitService,
    ExperimentService,
    MatrixService,
    OutputService,
    RentService,
)
from eventperp.app.services.rent_service import RENT_TABLE_COLUMNS
from eventperp.app.utils.errors import EmptyInput, EventPerpError
from eventperp.config.settings import (
    ENGINE_KINDS,
    LOG_LEVEL,
    MAX_WORKERS,
    OUTPUT_FORMATS,
    PORT,
    RENT_LEVERAGES,
)

logger = logging.getLogger('eventperp')

DATA_DIR = Path(__file__).resolve().parent / 'data'
BUNDLED_SCENARIOS = DATA_DIR / 'scenarios.txt'
BUNDLED_RENTS = DATA_DIR / 'rents.txt'

THRESHOLD_COLUMNS = [
    'label', 'k', 'p_det', 'penalty', 'capital', 'pi_yes', 'l_star', 'raw_l_star',
    'cost_term', 'detection_term', 'regime', 'always_profitable', 'channel', 'leverage_effect',
    'band_low', 'band_high', 'error',
]

AXIS_OPTIONS = {
    'k_axis': 'k_manip',
    'p_det_axis': 'p_detected',
    'penalty_axis': 'penalty_factor',
    'capital_axis': 'capital',
    'pi_yes_axis': 'pi_yes',
}


class EventPerpGroup(click.Group):
    """Maps domain errors to their exit codes instead of tracebacks"""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except EventPerpError as e:
            if e.exit_code >= 2:
                logger.error(f"Run aborted: {e.message}")
            click.echo(f"Error: {e.message}", err=True)
            ctx.exit(e.exit_code)


def _float_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(',') if item.strip()]
    except ValueError:
        raise click.BadParameter('expected comma-separated numbers')


def _override(config, seed, reps, engine, halt_ticks):
    """Apply command-line flags on top of a loaded run config"""
    changes = {}
    if seed is not None:
        changes['seed'] = seed
    if reps is not None:
        changes['reps'] = reps
    if engine is not None:
        changes['engine'] = config.engine.as_kind(engine)
        changes['engines'] = ()
    if halt_ticks is not None:
        changes['market'] = config.market.with_halt(halt_ticks)
        changes['halt_offsets'] = ()
    return replace(config, **changes) if changes else config


def _finish(command, config_path, seeds, outputs, out_dir, parameters=None):
    manifest = OutputService.build_manifest(command, config_path, seeds, outputs, parameters)
    OutputService.write_manifest(out_dir, manifest)
    return manifest


def _finish_stream(command, config_path, text, parameters=None):
    """Manifest for output echoed to stdout; written to stderr"""
    manifest = OutputService.build_stream_manifest(command, config_path, text, parameters)
    click.echo(manifest.to_json(), err=True)
    return manifest


def _echo_frame(frame: pd.DataFrame) -> str:
    text = '(no rows)' if frame.empty else frame.to_string(index=False)
    click.echo(text)
    return text + '\n'


def _emit_csv(command, source, frame: pd.DataFrame, out, parameters=None):
    """CSV to `out` with a manifest beside it, or to stdout with the manifest on stderr"""
    if out:
        OutputService.write_csv(out, frame)
        _finish(command, source, [], [out], Path(out).parent, parameters)
        click.echo(f"Wrote {len(frame)} rows to {out}")
        return
    text = frame.to_csv(index=False, lineterminator='\n')
    click.echo(text, nl=False)
    _finish_stream(command, source, text, parameters)


@click.group(cls=EventPerpGroup)
@click.option('--log-level', default=LOG_LEVEL, show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
def cli(log_level):
    """Leverage thresholds and venue simulations for event-linked perpetuals"""
    logging.basicConfig(level=log_level.upper(), format='%(asctime)s %(levelname)s %(name)s: %(message)s',
                        stream=sys.stderr)


@cli.command()
@click.argument('scenario_file', type=click.Path(dir_okay=False), default=str(BUNDLED_SCENARIOS))
@click.option('--out', type=click.Path(dir_okay=False), help='Also write the table as CSV to this path')
def threshold(scenario_file, out):
    """Leverage threshold, its cost and detection terms and the regime for each scenario.

    Rows that fail validation are reported with their error; the remaining
    rows are still computed. The exit code is 1 when any row failed.
    """
    entries = ConfigService.load_scenarios(scenario_file)
    if not entries:
        raise EmptyInput('scenario file holds no scenarios', source=scenario_file)

    rows = []
    for entry in entries:
        row = {'label': entry.label, 'error': entry.error}
        if entry.band:
            row['band_low'], row['band_high'] = entry.band
        if entry.ok:
            s = entry.scenario
            row.update(k=s.k_manip, p_det=s.p_detected, penalty=s.penalty_factor,
                       capital=s.capital, pi_yes=s.pi_yes)
            if s.channel is not None:
                row['channel'] = s.channel.value
                row['leverage_effect'] = MatrixService.lookup(s.channel).leverage_effect.value
            try:
                row.update(CostBenefitService.leverage_threshold(s).to_dict())
            except EventPerpError as e:
                row['error'] = f"{scenario_file}:{entry.line}: {e.message}"
                logger.warning(f"Scenario {entry.label}: {e.message}")
        rows.append(row)

    frame = pd.DataFrame(rows, columns=THRESHOLD_COLUMNS)
    text = _echo_frame(frame)
    if out:
        OutputService.write_csv(out, frame)
        _finish('threshold', scenario_file, [], [out], Path(out).parent)
    else:
        _finish_stream('threshold', scenario_file, text)

    failed = int(frame['error'].notna().sum())
    if failed:
        click.echo(f"{failed} of {len(frame)} scenario(s) failed", err=True)
        sys.exit(1)


@cli.command()
@click.argument('scenario_file', type=click.Path(dir_okay=False), default=str(BUNDLED_SCENARIOS))
@click.option('--label', 'labels', multiple=True, help='Sweep only these scenarios (repeatable)')
@click.option('--k-axis', callback=_float_list, help='Override the K values, comma separated')
@click.option('--p-det-axis', callback=_float_list, help='Override the detection probabilities')
@click.option('--penalty-axis', callback=_float_list, help='Override the penalty factors')
@click.option('--capital-axis', callback=_float_list, help='Override the capital values')
@click.option('--pi-yes-axis', callback=_float_list, help='Override the market probabilities')
@click.option('--out', type=click.Path(dir_okay=False), help='CSV path; stdout when omitted')
@click.option('--workers', default=MAX_WORKERS, show_default=True, type=click.IntRange(min=1))
def sweep(scenario_file, labels, out, workers, **axis_flags):
    """Sensitivity grid of the leverage threshold over each scenario's axes"""
    entries = ConfigService.load_scenarios(scenario_file)
    if not entries:
        raise EmptyInput('scenario file holds no scenarios', source=scenario_file)
    if labels:
        unknown = set(labels) - {entry.label for entry in entries}
        if unknown:
            raise click.BadParameter(f"no scenario labelled {', '.join(sorted(unknown))}", param_hint='--label')
        entries = [entry for entry in entries if entry.label in labels]

    overrides = {AXIS_OPTIONS[flag]: values for flag, values in axis_flags.items() if values is not None}
    frames = []
    for entry in entries:
        if not entry.ok:
            raise EventPerpError(entry.error)
        grid = CostBenefitService.sweep_thresholds(entry.scenario, {**entry.axes, **overrides},
                                                   entry.label, workers=workers)
        frames.append(grid.to_frame())
        if entry.band:
            check = CostBenefitService.band_deviation(grid, entry.band)
            logger.info(f"Scenario {entry.label}: grid {check['computed_min']:.4g}..{check['computed_max']:.4g}, "
                        f"stated band {entry.band}")

    frame = pd.concat(frames, ignore_index=True)
    _emit_csv('sweep', scenario_file, frame, out, {'labels': sorted(labels), 'overrides': overrides})


@cli.command()
@click.argument('config_file', type=click.Path(dir_okay=False))
@click.option('--seed', type=int, help='First seed; overrides [run] seed')
@click.option('--reps', type=click.IntRange(min=1), help='Number of consecutive seeds')
@click.option('--engine', type=click.Choice(ENGINE_KINDS), help='Run a single margin engine')
@click.option('--halt-ticks', type=click.IntRange(min=0), help='Resolution-zone halt offset in ticks')
@click.option('--format', 'fmt', type=click.Choice(OUTPUT_FORMATS), default='json', show_default=True,
              help='Per-run output: JSON report or CSV event log')
@click.option('--out', type=click.Path(file_okay=False), default='out', show_default=True)
@click.option('--workers', default=MAX_WORKERS, show_default=True, type=click.IntRange(min=1))
def simulate(config_file, seed, reps, engine, halt_ticks, fmt, out, workers):
    """Seeded venue runs over every engine and halt variant, plus a summary table"""
    config = _override(ConfigService.load_run_config(config_file), seed, reps, engine, halt_ticks)
    reports = ExperimentService.simulate(config, workers)

    out_dir = Path(out)
    outputs = []
    for report in reports:
        stem = out_dir / 'runs' / f"run_{report.engine_kind}_h{report.halt_offset}_s{report.seed}"
        if fmt == 'json':
            outputs.append(OutputService.write_json(stem.with_suffix('.json'), report.to_dict()))
        else:
            outputs.append(OutputService.write_csv(stem.with_suffix('.csv'), report.events_frame()))

    summary = ExperimentService.summarize(reports)
    outputs.append(OutputService.write_csv(out_dir / 'summary.csv', summary))
    _finish('simulate', config_file, config.seeds, outputs, out_dir,
            {'engine': engine, 'halt_ticks': halt_ticks, 'format': fmt})
    _echo_frame(summary)


@cli.command()
@click.argument('config_file', type=click.Path(dir_okay=False))
@click.option('--seed', type=int, help='First seed; overrides [run] seed')
@click.option('--reps', type=click.IntRange(min=1), help='Number of consecutive seeds')
@click.option('--engine', type=click.Choice(ENGINE_KINDS), help='Margin engine to attack')
@click.option('--halt-ticks', type=click.IntRange(min=0), help='Resolution-zone halt offset in ticks')
@click.option('--out', type=click.Path(file_okay=False), default='out', show_default=True)
def attack(config_file, seed, reps, engine, halt_ticks, out):
    """Run the config's [attack] block and write one attack report per seed"""
    config = _override(ConfigService.load_run_config(config_file), seed, reps, engine, halt_ticks)
    if config.attack_channel is None:
        raise EventPerpError(f"{config_file}: run config has no [attack] block")

    out_dir = Path(out)
    outputs = []
    rows = []
    for run_seed in config.seeds:
        report = AdversaryService.run_attack(config, run_seed).attack
        outputs.append(OutputService.write_json(out_dir / f"attack_{config.attack_channel}_s{run_seed}.json",
                                                report.to_dict()))
        rows.append({'seed': run_seed, 'channel': report.channel.value, 'net_pnl': report.net_pnl,
                     'manipulator_pnl': report.manipulator_pnl, 'cost': report.manipulation_cost,
                     'pool_drawdown': report.pool_drawdown, 'channel_absent': report.channel_absent})
    _finish('attack', config_file, config.seeds, outputs, out_dir, {'engine': engine, 'halt_ticks': halt_ticks})
    _echo_frame(pd.DataFrame(rows))


@cli.command()
@click.argument('profile_file', type=click.Path(dir_okay=False), default=str(BUNDLED_RENTS))
@click.option('--leverages', callback=_float_list, help="Leverages to tabulate; overrides each profile's list")
@click.option('--funding-cost', type=float, help='Funding cost per event; overrides each profile')
@click.option('--out', type=click.Path(dir_okay=False), help='CSV path; stdout when omitted')
def rents(profile_file, leverages, funding_cost, out):
    """Leveraged rent, Sharpe ratio and detection cost per dollar of rent for each profile"""
    entries = ConfigService.load_rent_profiles(profile_file)
    rows = []
    for entry in entries:
        funding = entry.funding_cost_per_event if funding_cost is None else funding_cost
        rows.extend(RentService.rent_table(entry.profile, leverages or entry.leverages or RENT_LEVERAGES,
                                           funding, entry.label))
    frame = pd.DataFrame(rows, columns=RENT_TABLE_COLUMNS)
    _emit_csv('rents', profile_file, frame, out, {'leverages': leverages, 'funding_cost': funding_cost})


@cli.command('rent-compression')
@click.argument('config_file', type=click.Path(dir_okay=False))
@click.option('--trader', required=True, help='Agent id of the informed trader')
@click.option('--seed', type=int, help='Overrides [run] seed')
@click.option('--out', type=click.Path(file_okay=False), default='out', show_default=True)
def rent_compression(config_file, trader, seed, out):
    """Informed trader's PnL and margin activity under the dynamic and static engines on one seed"""
    config = ConfigService.load_run_config(config_file)
    run_seed = config.seed if seed is None else seed
    report = RentService.compare_engines(config, run_seed, trader)

    out_dir = Path(out)
    path = OutputService.write_json(out_dir / f"rent_compression_{trader}_s{run_seed}.json", report.to_dict())
    _finish('rent-compression', config_file, [run_seed], [path], out_dir, {'trader': trader})
    _echo_frame(pd.DataFrame([report.dynamic.to_dict(), report.static.to_dict()]))


@cli.command()
@click.option('--format', 'fmt', type=click.Choice(OUTPUT_FORMATS), default='json', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), help='Output path; stdout when omitted')
def matrix(fmt, out):
    """Export the channel-control matrix"""
    if fmt == 'json':
        text = MatrixService.to_json() + '\n'
    else:
        text = MatrixService.to_frame().to_csv(index=False, lineterminator='\n')
    if not out:
        click.echo(text, nl=False)
        _finish_stream('matrix', None, text, {'format': fmt})
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    _finish('matrix', None, [], [path], path.parent, {'format': fmt})


@cli.command()
@click.option('--host', default='127.0.0.1', show_default=True)
@click.option('--port', default=PORT, show_default=True, type=int)
def serve(host, port):
    """Serve the JSON API with the Flask development server"""
    from eventperp.app.main import create_app

    create_app().run(host=host, port=port)


def main():
    cli()


if __name__ == '__main__':
    main()
