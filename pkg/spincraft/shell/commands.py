import argparse
import contextlib
import flagparse
import numpy
import pathlib
import sys

from typing import Optional

from spincraft import arglib, config, errors, hetero
from spincraft.analysis import ensemble, response, saving
from spincraft.analysis.transfer import (
    EfficiencyCurve, default_source, sweep_map)
from spincraft.logging import internal_logger
from spincraft.operators import transition_decomposition
from spincraft.propagator import average_hamiltonian_first_order
from spincraft.pulse import cycle
from spincraft.pulse.sequence import (
    AdiabaticShape, CslicParams, Sequence, adslic_samples, build_adslic,
    build_cslic, build_slic, optimal_repetitions, slic_duration)
from spincraft.shell import termlib
from spincraft.system import SpinSystem


phases = {"+x": 0.0, "x": 0.0, "-x": numpy.pi}


@contextlib.contextmanager
def exit_on_error(action: str):
    """Convert library errors into exit errors of the command line."""
    try:
        yield
    except errors.SpincraftError as e:
        raise flagparse.ExitError(2 if e.usage else 1,
                                  f"Failed to {action}. {e}.")
    except (OSError, ArithmeticError, numpy.linalg.LinAlgError) as e:
        raise flagparse.ExitError(1, f"Failed to {action}. {e}.")


def _require(args: flagparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--" + name.replace("_", "-")
            raise flagparse.ExitError(2, f"Flag {flag} is required.")


def _phase(args: flagparse.Namespace) -> float:
    if args.phase not in phases:
        raise flagparse.ExitError(
            2, f"Phase {args.phase} is not one of {', '.join(phases)}.")
    return phases[args.phase]


def _system(args: flagparse.Namespace) -> SpinSystem:
    if getattr(args, "system", None):
        return config.load_system(args.system)
    _require(args, "j", "delta")
    return SpinSystem.pair(args.j, args.delta)


def _repetitions(args: flagparse.Namespace) -> int:
    if args.n is not None:
        return args.n
    _require(args, "delta")
    return optimal_repetitions(args.j, args.delta)


def build_sequence(args: flagparse.Namespace, default_t=None) -> Sequence:
    """Build the sequence named by --sequence from the flags."""
    _require(args, "j")
    kind, phase = args.sequence, _phase(args)
    j = abs(args.j)

    if kind == "slic":
        t = args.t or default_t
        if t is None:
            _require(args, "delta")
            t = slic_duration(args.delta)
        return build_slic(j, t, phase)

    if kind == "adslic":
        _require(args, "t")
        shape = AdiabaticShape(args.delta_max, args.xi, args.t, args.samples)
        return build_adslic(shape, j, phase_rad=phase)

    if kind == "cslic":
        params = CslicParams.new(j, _repetitions(args), args.alpha,
                                 args.strong)
        return build_cslic(params, phase_rad=phase)

    if kind.startswith("cycle:"):
        text = kind[len("cycle:"):]
        alpha = None if args.strong is not None else args.alpha
        if args.n is None and getattr(args, "delta", None) is None:
            return cycle.parse_cycle(text, j, args.strong, alpha,
                                     phase_rad=phase)
        return cycle.repeat_cycle(text, _repetitions(args), j, args.strong,
                                  alpha, phase_rad=phase)

    raise flagparse.ExitError(
        2, f"Sequence {kind} is not one of slic, adslic, cslic, cycle:TEXT.")


sequence_arguments = [
    (["--sequence"],
     dict(metavar="SEQUENCE",
          default="slic",
          help="slic, adslic, cslic or cycle:TEXT (e.g. cycle:S3)")),
    (["--j"],
     dict(metavar="HZ",
          type=float,
          help="J-coupling of the pair, the matched nutation frequency")),
    (["--delta"],
     dict(metavar="HZ",
          type=float,
          help="chemical shift difference of the pair")),
    (["--t"],
     dict(metavar="SECONDS",
          type=float,
          help="spin-lock duration (slic, adslic)")),
    (["--n"],
     dict(metavar="N",
          type=int,
          help="number of cyclic elements, J/(√2Δ) rounded by default")),
    (["--alpha"],
     dict(metavar="ALPHA",
          type=float,
          default=0.99,
          help="flip-angle factor of the compensated spin-lock")),
    (["--strong"],
     dict(metavar="HZ",
          type=float,
          help="amplitude of the compensating pulse, overrides --alpha")),
    (["--phase"],
     dict(metavar="PHASE",
          default="+x",
          help="spin-lock phase, +x or -x")),
    (["--delta-max"],
     dict(metavar="FRACTION",
          type=float,
          default=0.5,
          help="depth of the adiabatic sweep")),
    (["--xi"],
     dict(metavar="XI",
          type=float,
          default=0.9,
          help="shape parameter of the adiabatic sweep")),
    (["--samples"],
     dict(metavar="N",
          type=int,
          default=adslic_samples,
          help="number of samples of the adiabatic sweep"))]


output_arguments = [
    (["-o", "--out"],
     dict(metavar="PATH",
          help="output file, CSV unless it ends with .json; "
               "standard output by default")),
    (["--threads"],
     dict(metavar="N",
          type=int,
          help=f"number of sweep workers, ${arglib.threads_env} "
               "or the number of cores by default"))]


def _write_curve(out: Optional[str], curve: EfficiencyCurve) -> None:
    saving.csv_export(out or sys.stdout, curve)


class Map(flagparse.SubCommand):
    """Shell command to sweep the transfer amplitude over offset and rf
    error."""

    name = "map"
    aliases = ["m"]
    help = "sweep transfer amplitude map"

    description = ("Compute the singlet-order transfer amplitude over the "
                   "resonance offset and the fractional rf error. Negative "
                   "ranges are passed as --eps-range=-0.5:0.5:101.")

    arguments = sequence_arguments + output_arguments + [
        (["--system"],
         dict(metavar="PATH",
              help="YAML file with the spin system, a pair by default")),
        (["--offset-range"],
         dict(metavar="START:STOP[:COUNT]",
              help="resonance offsets in Hz, ±J/5 by default")),
        (["--eps-range"],
         dict(metavar="START:STOP[:COUNT]",
              default="-0.5:0.5",
              help="fractional rf errors")),
        (["--res"],
         dict(metavar="N",
              type=int,
              default=101,
              help="points per axis when a range has no count")),
        (["--source"],
         dict(metavar="SOURCE",
              default=default_source,
              help="initial operator: -x, x, y, z or so")),
        (["--progress"],
         dict(action="store_true",
              default=False,
              help="show sweep progress"))]

    def handle(self, args: flagparse.Namespace) -> None:
        with exit_on_error("sweep map"):
            system = _system(args)
            seq = build_sequence(args)

            offset_range = args.offset_range
            if offset_range is None:
                offset_range = f"{-abs(args.j) / 5}:{abs(args.j) / 5}"
            offsets = arglib.parse_range(offset_range, "offset-range",
                                         args.res)
            eps = arglib.parse_range(args.eps_range, "eps-range", args.res)

            progress = termlib.progress if args.progress else None
            m = sweep_map(seq, system, offsets, eps, source=args.source,
                          threads=args.threads, progress=progress)

            if eps.size > 1 and m.column(0.0).max() > 0:
                internal_logger.info("Half-maximum ε-width at zero offset: "
                                     "%.6f", m.epsilon_width(0.5, 0.0))

            if args.out and str(args.out).endswith(".json"):
                saving.json_export(args.out, m)
            else:
                saving.csv_export(args.out or sys.stdout, m)


class Response(flagparse.SubCommand):
    """Shell command to compute the efficiency against the rf error."""

    name = "response"
    aliases = ["r"]
    help = "compute rf error response"

    description = ("Compute the excitation efficiency against the "
                   "fractional rf error from the closed-form expressions "
                   "or by simulation.")

    modes = ["analytic-slic", "analytic-cslic", "numeric"]

    arguments = sequence_arguments + output_arguments + [
        (["--mode"],
         dict(metavar="MODE",
              choices=modes,
              default="analytic-slic",
              help="analytic-slic, analytic-cslic or numeric")),
        (["--eps-range"],
         dict(metavar="START:STOP[:COUNT]",
              default="-0.5:0.5",
              help="fractional rf errors")),
        (["--res"],
         dict(metavar="N",
              type=int,
              default=101,
              help="points when the range has no count")),
        (["--source"],
         dict(metavar="SOURCE",
              default=default_source,
              help="initial operator of the numeric mode")),
        (["--raw"],
         dict(action="store_true",
              default=False,
              help="do not normalize the numeric curve to ε = 0"))]

    def handle(self, args: flagparse.Namespace) -> None:
        with exit_on_error("compute response"):
            _require(args, "j", "delta")
            eps = arglib.parse_range(args.eps_range, "eps-range", args.res)

            rabi = numpy.sqrt(2) * numpy.pi * abs(args.delta)
            resonance = 2 * numpy.pi * args.j

            if args.mode == "analytic-slic":
                values = [response.xi_slic_nominal(rabi, resonance, e)
                          for e in eps]
            elif args.mode == "analytic-cslic":
                values = [response.xi_cslic_nominal(rabi, e) for e in eps]
            else:
                seq = build_sequence(args)
                system = SpinSystem.pair(args.j, args.delta)
                m = sweep_map(seq, system, [0.0], eps, source=args.source,
                              threads=args.threads)
                values = m.amplitude[:, 0]

            curve = EfficiencyCurve(eps, values, dict(mode=args.mode))
            if args.mode == "numeric" and not args.raw:
                curve = curve.normalized()
            if len(curve) > 1 and curve.amplitude.max() > 0:
                internal_logger.info("Half-maximum ε-width of %s: %.6f",
                                     args.mode, curve.width())
            _write_curve(args.out, curve)


class Effham(flagparse.SubCommand):
    """Shell command to print the first-order average Hamiltonian."""

    name = "effham"
    aliases = ["e"]
    help = "print average Hamiltonian"

    description = ("Integrate the first-order average Hamiltonian of the "
                   "sequence over its duration and decompose it onto the "
                   "singlet-triplet transitions.")

    arguments = sequence_arguments + [
        (["--eps"],
         dict(metavar="EPS",
              type=float,
              default=0.0,
              help="fractional rf error")),
        (["--steps"],
         dict(metavar="N",
              type=int,
              default=10000,
              help="number of integration steps")),
        (["--method"],
         dict(metavar="METHOD",
              choices=["exact", "midpoint"],
              default="exact",
              help="integration of the pieces, exact or midpoint")),
        (["--matrix"],
         dict(action="store_true",
              default=False,
              help="print the matrix too"))]

    def handle(self, args: flagparse.Namespace) -> None:
        with exit_on_error("compute average Hamiltonian"):
            _require(args, "j", "delta")
            system = SpinSystem.pair(args.j, args.delta)
            if args.n is None and args.sequence != "slic":
                # One element or cycle per modulation period.
                args = flagparse.Namespace(**dict(vars(args), n=1))
            seq = build_sequence(args, default_t=1 / abs(args.j))

            h = average_hamiltonian_first_order(
                seq, system, eps_rf=args.eps, steps=args.steps,
                method=args.method)
            coefficients = transition_decomposition(h, (1, 2), 2)

            transition, component, value = max(
                ((t, c, v) for t, cs in coefficients.items()
                 for c, v in cs.items()),
                key=lambda item: abs(item[2]))
            scale = numpy.sqrt(2) * numpy.pi * args.delta

            report = dict(
                sequence=seq.name,
                duration_s=seq.total_duration,
                dominant=dict(transition=transition,
                              component=component,
                              coefficient=float(value),
                              relative=float(value / scale) if scale else 0),
                coefficients={t: {c: round(float(v), 9)
                                  for c, v in cs.items()}
                              for t, cs in coefficients.items()})
            if args.matrix:
                report["matrix"] = [[f"{v.real:.6g}{v.imag:+.6g}j"
                                     for v in row] for row in h.matrix]
            print(config.dump(report), end="")


class Parse(flagparse.SubCommand):
    """Shell command to expand a cycle string."""

    name = "parse"
    help = "expand cycle string"

    description = ("Expand a cycle string of A/B elements, C1-C3 "
                   "permutations and S1-S3 supercycles.")

    arguments = [
        (["text"],
         dict(metavar="TEXT",
              default=argparse.SUPPRESS,
              help="cycle string, e.g. ABBA or S3")),
        (["--j"],
         dict(metavar="HZ",
              type=float,
              help="weak amplitude, prints timings when given")),
        (["--alpha"],
         dict(metavar="ALPHA",
              type=float,
              default=0.99,
              help="flip-angle factor")),
        (["--strong"],
         dict(metavar="HZ",
              type=float,
              help="amplitude of the compensating pulse"))]

    def handle(self, args: flagparse.Namespace) -> None:
        with exit_on_error("parse cycle"):
            expansion = cycle.expand_cycle(args.text)
            report = dict(cycle=args.text,
                          expansion=expansion,
                          elements=len(expansion))

            if args.j is not None:
                alpha = None if args.strong is not None else args.alpha
                seq = cycle.parse_cycle(args.text, abs(args.j), args.strong,
                                        alpha)
                report.update(alpha=seq.params["alpha"],
                              strong_nut_hz=seq.params["strong_nut_hz"],
                              duration_s=seq.total_duration,
                              segments=[s.asdict() for s in seq.merged()])
            print(config.dump(report), end="")


class Pipeline(flagparse.SubCommand):
    """Shell command to simulate the heteronuclear transfer."""

    name = "pipeline"
    aliases = ["p"]
    help = "simulate heteronuclear transfer"

    description = ("Simulate the proton to carbon transfer through proton "
                   "singlet order against the fractional rf error.")

    arguments = [
        (["-c", "--config"],
         dict(metavar="PATH",
              help="YAML file with the system, sequences and ε grid")),
        (["--eps-range"],
         dict(metavar="START:STOP:COUNT",
              help="overrides eps")),
        (["--eps-channels"],
         dict(metavar="CHANNELS",
              help="comma-separated channels receiving the rf error")),
        (["--distribution"],
         dict(metavar="KIND",
              choices=["gaussian", "uniform"],
              help="overrides distribution.kind")),
        (["--width"],
         dict(metavar="WIDTH",
              type=float,
              help="overrides distribution.width")),
        (["--points"],
         dict(metavar="N",
              type=int,
              help="overrides distribution.points"))] + output_arguments

    def handle(self, args: flagparse.Namespace) -> None:
        with exit_on_error("run pipeline"):
            _require(args, "config")
            data = config.override(config.load(args.config),
                                   **{"eps": args.eps_range,
                                      "eps_channels": args.eps_channels,
                                      "distribution.kind": args.distribution,
                                      "distribution.width": args.width,
                                      "distribution.points": args.points,
                                      "output": args.out})
            p = config.pipeline_config(data, args.config)

            values = hetero.sweep_pipeline(p.seq_h, p.seq_c, p.system,
                                           p.eps_axis, p.eps_channels,
                                           threads=args.threads)
            curve = EfficiencyCurve(p.eps_axis, values,
                                    dict(sequences=[p.seq_h.name,
                                                    p.seq_c.name]))

            output = p.output
            if output is not None and args.out is None:
                output = config.resolve(args.config).parent.joinpath(output)
            elif output is not None:
                output = pathlib.Path(output)
            _write_curve(output, curve)

            if p.distribution is None:
                return

            def point(eps: float) -> float:
                return hetero.run_pipeline(
                    p.seq_h, p.seq_c, p.system,
                    hetero.channel_errors(eps, p.eps_channels))

            mean = ensemble.rf_inhomogeneity_average(point, p.distribution)
            internal_logger.info("Ensemble mean of %s/%s over %s σ=%g: %.6f",
                                 p.seq_h.name, p.seq_c.name,
                                 p.distribution.kind, p.distribution.width,
                                 mean)
            if output is not None:
                print(config.dump(dict(output=str(output),
                                        points=int(p.eps_axis.size),
                                        ensemble_mean=float(mean))),
                      end="")
