#!/usr/bin/env python3
"""
qbench command line
List families, write instance documents, run benchmark plans, score external
histograms, analyse time-to-solution and render reports.
"""

import argparse
import json
import os
import sys
from typing import Callable, List, Optional

import numpy as np

from bench_config import BenchConfig
from errors import BenchmarkError, InvalidArgumentError
from generators import (ImageSpec, MaxCutInstance, faa_p_max, gen_cosine_qft, gen_hidden_phase_qft,
                        load_image)
from harness import (FAMILIES, REPORT_FORMATS, ProblemInstanceDoc, RunPlan, emit_report,
                     gen_fcw_graph, gen_regular_graph, load_instance, load_results_jsonl,
                     maxcut_document, parse_backend, run_with_failures, save_instance)
from logger_config import bench_logger
from scoring import (approximation_ratio, chem_energy, faa_score, hellinger_score,
                     hidden_shift_score, mse_score)
from simulator import ShotHistogram
from tts import (QualityHistogram, binomial_hamming_baseline, evaluate_tts_fit,
                 exact_random_ar_distribution, fit_tts_extrapolation, success_prob, tts_curve,
                 tts_expectation)


def _banner(title: str):
    print("\n" + "=" * 60)
    print(f"QBENCH - {title}")
    print("=" * 60 + "\n")


def parse_grid(text: str, cast: Callable = int, steps: int = 11) -> List:
    """'1,2,5' or an inclusive range 'a..b' (integer step for ints, `steps` points for floats)"""
    text = text.strip()
    try:
        if '..' in text:
            lo, hi = (cast(x) for x in text.split('..', 1))
            if cast is int:
                values = list(range(lo, hi + 1))
            else:
                values = [float(x) for x in np.linspace(lo, hi, steps)]
        else:
            values = [cast(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise InvalidArgumentError(f"Cannot parse grid {text!r}")
    if not values:
        raise InvalidArgumentError(f"Grid {text!r} is empty")
    return values


def _parse_options(pairs: Optional[List[str]]) -> dict:
    options = {}
    for pair in pairs or []:
        if '=' not in pair:
            raise InvalidArgumentError(f"Option {pair!r} must look like key=value")
        key, value = pair.split('=', 1)
        try:
            options[key] = json.loads(value)
        except json.JSONDecodeError:
            options[key] = value
    return options


def _read_histogram(path: str) -> ShotHistogram:
    with open(path) as f:
        return ShotHistogram.from_json(f.read())


def _require_instance(args, purpose: str) -> ProblemInstanceDoc:
    if not args.instance:
        raise InvalidArgumentError(f"--instance is required for {purpose}")
    return load_instance(args.instance)


def cmd_list(args) -> int:
    _banner("Families and bundled instances")
    for family in FAMILIES:
        print(f"  {family}")
    print("\nBundled data:")
    data_dir = BenchConfig.DATA_DIR
    if os.path.isdir(data_dir):
        for name in sorted(os.listdir(data_dir)):
            print(f"  {os.path.join(data_dir, name)}")
    print()
    return 0


def cmd_gen(args) -> int:
    if args.family in ('qaoa', 'lr_qaoa'):
        if args.graph == 'fcw':
            inst = gen_fcw_graph(args.n, args.seed)
        else:
            inst = gen_regular_graph(args.n, args.degree, args.seed)
        doc = maxcut_document(inst)
    elif args.family == 'mps':
        if not args.image:
            raise InvalidArgumentError("--image is required for the mps family")
        img = load_image(args.image, args.size)
        doc = ProblemInstanceDoc('image_loading', 'mps_amplitude_encoding',
                                 os.path.splitext(os.path.basename(args.image))[0], ['mps'],
                                 img.num_qubits, {'pixels': img.pixels.tolist()})
    else:
        raise InvalidArgumentError(f"gen supports qaoa, lr_qaoa and mps, not {args.family!r}")
    save_instance(doc, args.out)
    print(f"✓ Wrote {doc.instance_name} ({doc.num_qubits} qubits) to {args.out}")
    return 0


def cmd_run(args) -> int:
    if args.qubit_cap:
        os.environ['QBENCH_QUBIT_CAP'] = str(args.qubit_cap)
    plan = RunPlan(
        family=args.family,
        backend=parse_backend(args.backend),
        depths=parse_grid(args.depths),
        shots=parse_grid(args.shots),
        seeds=parse_grid(args.seed),
        n_qubits=args.n,
        instance_path=args.instance,
        options=_parse_options(args.option),
        em=args.em,
        energy_kwh=args.energy_kwh,
        out_csv=args.out,
        out_jsonl=args.jsonl,
        out_quality=args.quality_out,
    )
    _banner(f"Running {plan.family} on {plan.backend.label}")
    results, failures = run_with_failures(plan)
    for r in results:
        print(f"✓ {r.problem}: score={r.score:.6f} n_1q={r.n_1q} n_2q={r.n_2q} time={r.exec_time_s:.3f}s")
    for failure in failures:
        print(f"❌ {failure.problem}: {failure.reason}")
    if args.out and results:
        print(f"\nResults written to {args.out}")
    if args.quality_out and results:
        print(f"Quality histograms written next to {args.quality_out}")
    return 0 if not failures else 1


def cmd_score(args) -> int:
    hists = [_read_histogram(p) for p in args.hist]
    family = args.family
    if family in ('qaoa', 'lr_qaoa'):
        score = approximation_ratio(hists[0], _require_instance(args, family).payload(), family)
    elif family == 'chemistry':
        if len(hists) != 3:
            raise InvalidArgumentError("chemistry needs Z, X and Y histograms in that order")
        energy, score = chem_energy(_require_instance(args, family).payload(), *hists)
        print(f"Energy: {energy:.9f} Ha")
    elif family == 'mps':
        payload = _require_instance(args, family).payload()
        if not isinstance(payload, ImageSpec):
            raise InvalidArgumentError(f"{args.instance} is not an image instance")
        score = mse_score(hists[0], payload)
    elif family == 'faa':
        if not args.target:
            raise InvalidArgumentError("--target is required for faa")
        score = faa_score(hists[0], args.target, faa_p_max(len(args.target)))
    elif family == 'hidden_shift':
        if not args.target:
            raise InvalidArgumentError("--target (the shift) is required for hidden_shift")
        score = hidden_shift_score(hists[0], args.target)
    elif family == 'cosine_qft':
        _, ref = gen_cosine_qft(hists[0].num_bits, args.param)
        score = hellinger_score(hists[0], ref, family)
    elif family == 'hidden_phase_qft':
        if args.param is None:
            raise InvalidArgumentError("--param (k*) is required for hidden_phase_qft")
        _, ref = gen_hidden_phase_qft(hists[0].num_bits - 1, args.param)
        score = hellinger_score(hists[0], ref, family)
    else:
        raise InvalidArgumentError(f"Cannot score family {family!r}")
    bench_logger.log_score(family, args.instance or args.hist[0], score.value, score.passed)
    status = '' if score.passed is None else ('  ✓ pass' if score.passed else '  ❌ fail')
    print(f"{family} score: {score.value:.9f}{status}")
    return 0


def _baseline_histogram(args, t_shot: float) -> Optional[QualityHistogram]:
    if not args.baseline:
        return None
    t_base = args.baseline_t_shot or t_shot
    if args.baseline == 'random-ar':
        inst = _require_instance(args, 'the random-ar baseline').payload()
        if not isinstance(inst, MaxCutInstance):
            raise InvalidArgumentError(f"{args.instance} is not a MaxCut instance")
        return exact_random_ar_distribution(inst, t_base)
    if not args.bits:
        raise InvalidArgumentError("--bits is required for the hamming baseline")
    return binomial_hamming_baseline(args.bits, t_base)


def cmd_tts(args) -> int:
    with open(args.hist) as f:
        h = QualityHistogram.from_json(f.read())
    if args.t_shot is not None:
        h.t_shot = args.t_shot
    thresholds = parse_grid(args.thresholds, float, args.steps)
    curve = tts_curve(h, thresholds, args.confidence)
    base = _baseline_histogram(args, h.t_shot)
    base_curve = tts_curve(base, thresholds, args.confidence) if base else None
    _banner(f"Time to solution (c = {args.confidence})")
    header = f"{'threshold':>10} {'q_hat':>12} {'TTS_exp (s)':>14} {'TTS_c (s)':>14}"
    if base:
        header += f" {'q_base':>12} {'TTS_base (s)':>14}"
    print(header)
    for i, (p, tts_c) in enumerate(zip(curve.thresholds, curve.tts_seconds)):
        q_hat = success_prob(h, p)
        line = f"{p:>10.4f} {q_hat:>12.6g} {tts_expectation(q_hat, h.t_shot):>14.6g} {tts_c:>14.6g}"
        if base:
            line += f" {success_prob(base, p):>12.6g} {base_curve.tts_seconds[i]:>14.6g}"
        print(line)
    if args.extrapolate:
        coeffs = fit_tts_extrapolation(list(zip(curve.thresholds, curve.tts_seconds)))
        print(f"\nln TTS_c = {coeffs[0]:.6g} x^2 + {coeffs[1]:.6g} x + {coeffs[2]:.6g}")
        for x in parse_grid(args.extrapolate, float, args.steps):
            print(f"{x:>10.4f} {'':>12} {'':>14} {evaluate_tts_fit(coeffs, x):>14.6g}")
    print()
    return 0


def cmd_report(args) -> int:
    results = load_results_jsonl(args.input)
    out = args.out or os.path.splitext(args.input)[0] + {'csv': '.csv', 'jsonl': '.report.jsonl',
                                                         'markdown': '.md'}[args.format]
    emit_report(results, args.format, out)
    print(f"✓ {len(results)} rows written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qbench', description='Application-level quantum benchmark harness')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('list', help='List families and bundled instances')
    p.set_defaults(func=cmd_list)

    p = sub.add_parser('gen', help='Write a problem instance document')
    p.add_argument('--family', required=True, choices=('qaoa', 'lr_qaoa', 'mps'))
    p.add_argument('--n', type=int, default=8, help='Vertex count')
    p.add_argument('--degree', type=int, default=3)
    p.add_argument('--graph', choices=('regular', 'fcw'), default='regular')
    p.add_argument('--seed', type=int, default=BenchConfig.DEFAULT_SEED)
    p.add_argument('--image', help='Image file for the mps family')
    p.add_argument('--size', type=int, help='Resize the image to size x size')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser('run', help='Run a benchmark plan')
    p.add_argument('--family', required=True, choices=FAMILIES)
    p.add_argument('--backend', default='ideal', help='ideal | noisy:p1,p2 | random | external:<adapter>')
    p.add_argument('--shots', default=str(BenchConfig.DEFAULT_SHOTS))
    p.add_argument('--seed', default=str(BenchConfig.DEFAULT_SEED))
    p.add_argument('--depths', default='1', help='e.g. 1..3 or 1,2,5')
    p.add_argument('--n', type=int, default=8, help='Problem size in qubits')
    p.add_argument('--instance', help='Instance document or image path')
    p.add_argument('--option', action='append', help='Family option key=value (repeatable)')
    p.add_argument('--em', action='store_true', help='Mark rows as error-mitigated')
    p.add_argument('--energy-kwh', type=float)
    p.add_argument('--qubit-cap', type=int, help='Override QBENCH_QUBIT_CAP')
    p.add_argument('--out', help='CSV output path')
    p.add_argument('--jsonl', help='JSON lines output path')
    p.add_argument('--quality-out', help='Quality histogram JSON path (qaoa, lr_qaoa, hidden_shift)')
    p.set_defaults(func=cmd_run)

    p = sub.add_parser('score', help='Score external histogram files')
    p.add_argument('--family', required=True, choices=FAMILIES)
    p.add_argument('--hist', required=True, nargs='+', help='Histogram JSON file(s)')
    p.add_argument('--instance', help='Instance document')
    p.add_argument('--target', help='Target bitstring (faa) or shift (hidden_shift)')
    p.add_argument('--param', type=int, help='Cosine frequency s or hidden phase k*')
    p.set_defaults(func=cmd_score)

    p = sub.add_parser('tts', help='Time-to-solution table for a quality histogram')
    p.add_argument('--hist', required=True, help='Quality histogram JSON')
    p.add_argument('--t-shot', type=float, help='Seconds per shot (overrides the file)')
    p.add_argument('--confidence', type=float, default=BenchConfig.DEFAULT_TTS_CONFIDENCE)
    p.add_argument('--thresholds', default='0.5..1.0')
    p.add_argument('--steps', type=int, default=11)
    p.add_argument('--baseline', choices=('random-ar', 'hamming'), help='Add a random-guessing baseline column')
    p.add_argument('--instance', help='MaxCut instance document for the random-ar baseline')
    p.add_argument('--bits', type=int, help='Bitstring length for the hamming baseline')
    p.add_argument('--baseline-t-shot', type=float, help='Seconds per baseline shot (defaults to the histogram value)')
    p.add_argument('--extrapolate', help='Thresholds to extrapolate TTS_c to from a quadratic fit of ln TTS_c')
    p.set_defaults(func=cmd_tts)

    p = sub.add_parser('report', help='Render a results file')
    p.add_argument('--in', dest='input', required=True, help='results.jsonl')
    p.add_argument('--format', choices=REPORT_FORMATS, default='markdown')
    p.add_argument('--out')
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    is_valid, message = BenchConfig.validate()
    if not is_valid:
        print(f"❌ Configuration error: {message}")
        return 1
    bench_logger.log_debug('Configuration loaded', command=args.command, **BenchConfig.as_dict())
    try:
        return args.func(args)
    except BenchmarkError as e:
        bench_logger.log_error(f"{args.command} failed", e)
        print(f"❌ {e}")
        return 1
    except OSError as e:
        bench_logger.log_error(f"{args.command} failed", e)
        print(f"❌ {e}")
        return 1


if __name__ == '__main__':
    sys.exit(main())
