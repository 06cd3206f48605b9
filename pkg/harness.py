"""
Benchmark harness for qbench
Backends, problem-instance documents, run orchestration and result reports.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from bench_config import BenchConfig
from circuit import Circuit, GateCensus, gate_census
from errors import (BackendError, BenchmarkError, InvalidArgumentError, SchemaError,
                    UnsupportedFamilyError)
from generators import (ChemInstance, FaaSpec, ImageSpec, LrRampParams, MaxCutInstance,
                        faa_p_max, fixed_qaoa_angles, gen_cosine_qft, gen_faa,
                        gen_hidden_phase_qft, gen_hidden_shift_challenge, gen_mps_loading,
                        gen_pucc_circuits, gen_qaoa_maxcut, load_image, lr_qaoa_schedule)
from logger_config import bench_logger
from scoring import (Score, approximation_ratio, ar_eff, best_cut_quality, chem_energy, faa_score,
                     hamming_quality, hellinger_score, hidden_shift_challenge_score, mse_score,
                     random_baseline)
from simulator import (NoiseModel, ShotHistogram, format_bits, ideal_distribution, sample,
                       simulate_noisy, uniform_histogram)
from tts import QualityHistogram

REPORT_COLUMNS = ('domain', 'problem', 'algorithm', 'n_qubits', 'n_circuits', 'n_1q', 'n_2q',
                  'shots', 'backend', 'em', 'score', 'exec_time_s', 'energy_kwh')
REPORT_FORMATS = ('csv', 'jsonl', 'markdown')
FAMILIES = ('qaoa', 'lr_qaoa', 'cosine_qft', 'hidden_phase_qft', 'hidden_shift', 'faa', 'mps', 'chemistry')
QUALITY_FAMILIES = ('qaoa', 'lr_qaoa', 'hidden_shift')

# External adapters: name -> callable(circuit, shots, seed) returning histogram JSON text
_ADAPTERS: Dict[str, Callable[[Circuit, int, int], str]] = {}


def register_adapter(name: str, adapter: Callable[[Circuit, int, int], str]):
    """Register an external backend that emits the histogram interchange JSON"""
    _ADAPTERS[name] = adapter


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BackendRef:
    kind: str
    label: str
    noise: Optional[NoiseModel] = None
    adapter: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ('ideal_sim', 'noisy_sim', 'random_sampler', 'external'):
            raise InvalidArgumentError(f"Unknown backend kind {self.kind!r}")
        if self.kind == 'noisy_sim' and self.noise is None:
            raise InvalidArgumentError("noisy_sim backend needs a noise model")
        if self.kind == 'external' and not self.adapter:
            raise InvalidArgumentError("external backend needs an adapter name")

    def execute(self, c: Circuit, shots: int, seed: int) -> Tuple[ShotHistogram, float]:
        """Histogram over the circuit's measured qubits and the execution wall time"""
        start = time.perf_counter()
        if self.kind == 'ideal_sim':
            hist = sample(ideal_distribution(c), shots, seed)
        elif self.kind == 'noisy_sim':
            hist = simulate_noisy(c, dataclasses.replace(self.noise, seed=seed), shots)
        elif self.kind == 'random_sampler':
            hist = uniform_histogram(len(c.measured_qubits), shots, seed)
        else:
            adapter = _ADAPTERS.get(self.adapter)
            if adapter is None:
                raise BackendError(f"No external adapter registered as {self.adapter!r}")
            try:
                hist = ShotHistogram.from_json(adapter(c, shots, seed))
            except BenchmarkError:
                raise
            except Exception as e:
                raise BackendError(f"Adapter {self.adapter!r} failed: {e}")
        elapsed = time.perf_counter() - start
        bench_logger.log_execution(self.label, c.num_qubits, shots, elapsed)
        return hist, elapsed


def parse_backend(text: str) -> BackendRef:
    """'ideal', 'noisy:p1,p2', 'random' or 'external:<adapter>'"""
    text = text.strip()
    if text == 'ideal':
        return BackendRef('ideal_sim', 'ideal')
    if text == 'random':
        return BackendRef('random_sampler', 'random')
    if text.startswith('noisy:'):
        try:
            p1, p2 = (float(x) for x in text[len('noisy:'):].split(','))
        except ValueError:
            raise InvalidArgumentError(f"Noisy backend must look like noisy:p1,p2, got {text!r}")
        return BackendRef('noisy_sim', f'noisy(p1={p1:g},p2={p2:g})', NoiseModel(p1, p2))
    if text.startswith('external:'):
        name = text[len('external:'):]
        return BackendRef('external', name, adapter=name)
    raise InvalidArgumentError(f"Unknown backend {text!r}")


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

def gen_regular_graph(n: int, d: int, seed: Optional[int] = None) -> MaxCutInstance:
    """Uniform random simple d-regular graph with unit weights"""
    if d < 1 or d >= n:
        raise InvalidArgumentError(f"Degree {d} must satisfy 1 <= d < n = {n}")
    if (n * d) % 2:
        raise InvalidArgumentError(f"n * d = {n * d} is odd; no {d}-regular graph on {n} vertices")
    graph = nx.random_regular_graph(d, n, seed=seed)
    edges = sorted((min(u, v), max(u, v), 1.0) for u, v in graph.edges())
    return MaxCutInstance(n, edges, f'{d}-regular', name=f'{d}reg_n{n}_s{seed}')


def gen_fcw_graph(n: int, seed: Optional[int] = None) -> MaxCutInstance:
    """Complete graph with weights uniform on (0, 1]"""
    if n < 2:
        raise InvalidArgumentError("FCW graph needs n >= 2")
    rng = np.random.default_rng(seed)
    edges = [(u, v, float(1.0 - rng.random())) for u, v in sorted(nx.complete_graph(n).edges())]
    return MaxCutInstance(n, edges, 'FCW', name=f'fcw_n{n}_s{seed}')


@dataclass
class ProblemInstanceDoc:
    benchmark_category: str
    problem_type: str
    instance_name: str
    solution_algorithms: List[str]
    num_qubits: int
    data: Dict[str, Any]
    base_dir: str = ''

    REQUIRED = ('benchmark_category', 'problem_type', 'instance_name', 'solution_algorithms',
                'num_qubits', 'data')

    def to_dict(self) -> Dict[str, Any]:
        return {key: getattr(self, key) for key in self.REQUIRED}

    @classmethod
    def from_dict(cls, doc: Dict[str, Any], base_dir: str = '') -> 'ProblemInstanceDoc':
        for key in cls.REQUIRED:
            if key not in doc:
                raise SchemaError(f"Instance document missing '{key}'", key=key)
        return cls(doc['benchmark_category'], doc['problem_type'], doc['instance_name'],
                   list(doc['solution_algorithms']), int(doc['num_qubits']), dict(doc['data']),
                   base_dir)

    def payload(self):
        """Validated family payload: ChemInstance, MaxCutInstance or ImageSpec"""
        category = self.benchmark_category
        if category == 'chemistry':
            return ChemInstance.from_document(self.to_dict())
        if category == 'optimization' and self.problem_type == 'maxcut':
            inst = MaxCutInstance.from_dict(self.data, self.instance_name)
            if inst.n != self.num_qubits:
                raise SchemaError(f"num_qubits {self.num_qubits} does not match {inst.n} vertices",
                                  key='num_qubits')
            return inst
        if category == 'image_loading':
            if 'pixels' in self.data:
                img = ImageSpec(np.array(self.data['pixels'], dtype=float), self.instance_name)
            elif 'path' in self.data:
                img = load_image(os.path.join(self.base_dir, self.data['path']), self.data.get('size'))
            else:
                raise SchemaError("Image payload needs 'pixels' or 'path'", key='pixels')
            if img.num_qubits != self.num_qubits:
                raise SchemaError(f"num_qubits {self.num_qubits} does not match a {img.size}x{img.size} image",
                                  key='num_qubits')
            return img
        raise UnsupportedFamilyError(f"Unsupported instance family {category}/{self.problem_type}")


def load_instance(path: str) -> ProblemInstanceDoc:
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}")
    parsed = ProblemInstanceDoc.from_dict(doc, os.path.dirname(os.path.abspath(path)))
    parsed.payload()
    return parsed


def save_instance(doc: ProblemInstanceDoc, path: str):
    with open(path, 'w') as f:
        json.dump(doc.to_dict(), f, indent=2)


def maxcut_document(inst: MaxCutInstance) -> ProblemInstanceDoc:
    return ProblemInstanceDoc('optimization', 'maxcut', inst.name or f'maxcut_n{inst.n}',
                              ['qaoa', 'lr_qaoa'], inst.n, inst.to_dict())


# ---------------------------------------------------------------------------
# Results and plans
# ---------------------------------------------------------------------------

@dataclass
class BenchmarkResult:
    domain: str
    problem: str
    algorithm: str
    n_qubits: int
    n_circuits: int
    n_1q: int
    n_2q: int
    shots: int
    backend: str
    em: bool
    score: float
    exec_time_s: float
    energy_kwh: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {col: getattr(self, col) for col in REPORT_COLUMNS}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BenchmarkResult':
        for key in REPORT_COLUMNS:
            if key not in data:
                raise SchemaError(f"Result record missing '{key}'", key=key)
        energy = data['energy_kwh']
        return cls(
            str(data['domain']), str(data['problem']), str(data['algorithm']),
            int(data['n_qubits']), int(data['n_circuits']), int(data['n_1q']), int(data['n_2q']),
            int(data['shots']), str(data['backend']), _as_bool(data['em']), float(data['score']),
            float(data['exec_time_s']), None if energy in (None, '') else float(energy))


def _as_bool(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in ('true', '1', 'yes')
    return bool(value)


@dataclass
class RowFailure:
    family: str
    problem: str
    reason: str


@dataclass
class RunPlan:
    """One family over depth x shots x seed grids on one backend"""
    family: str
    backend: BackendRef
    depths: List[int] = field(default_factory=lambda: [1])
    shots: List[int] = field(default_factory=lambda: [BenchConfig.DEFAULT_SHOTS])
    seeds: List[int] = field(default_factory=lambda: [BenchConfig.DEFAULT_SEED])
    n_qubits: int = 8
    instance_path: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)
    em: bool = False
    energy_kwh: Optional[float] = None
    out_csv: Optional[str] = None
    out_jsonl: Optional[str] = None
    out_quality: Optional[str] = None

    def validate(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamilyError(f"Unknown family {self.family!r}; expected one of {FAMILIES}")
        for name in ('depths', 'shots', 'seeds'):
            grid = getattr(self, name)
            if not grid:
                raise InvalidArgumentError(f"RunPlan.{name} must not be empty")
        if any(s < 1 for s in self.shots):
            raise InvalidArgumentError("Shot counts must be positive")
        if any(d < 1 for d in self.depths):
            raise InvalidArgumentError("Depths must be positive")
        if self.n_qubits < 1:
            raise InvalidArgumentError("n_qubits must be positive")
        if self.instance_path and not os.path.exists(self.instance_path):
            raise InvalidArgumentError(f"Instance file not found: {self.instance_path}")
        if self.out_quality and self.family not in QUALITY_FAMILIES:
            raise InvalidArgumentError(
                f"Quality histograms are available for {QUALITY_FAMILIES}, not {self.family!r}")


@dataclass
class _Job:
    domain: str
    problem: str
    algorithm: str
    circuits: List[Circuit]
    scorer: Callable[[List[ShotHistogram]], Score]
    # (histograms, t_shot) -> per-shot quality histogram
    quality: Optional[Callable[[List[ShotHistogram], float], QualityHistogram]] = None


def _child_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def _maxcut_instance(plan: RunPlan, seed: int) -> MaxCutInstance:
    if plan.instance_path:
        payload = load_instance(plan.instance_path).payload()
        if not isinstance(payload, MaxCutInstance):
            raise InvalidArgumentError(f"{plan.instance_path} is not a MaxCut instance")
        return payload
    graph = plan.options.get('graph', '3-regular' if plan.family == 'qaoa' else 'fcw')
    if graph == 'fcw':
        return gen_fcw_graph(plan.n_qubits, seed)
    if graph.endswith('-regular'):
        return gen_regular_graph(plan.n_qubits, int(graph.split('-')[0]), seed)
    raise InvalidArgumentError(f"Unknown graph family {graph!r}")


def _hamming_quality_all(hists: List[ShotHistogram], shifts: List[str], t_shot: float) -> QualityHistogram:
    entries = [e for h, s in zip(hists, shifts) for e in hamming_quality(h, s, t_shot).entries]
    return QualityHistogram(entries, t_shot)


def _build_job(plan: RunPlan, depth: int, seed: int) -> _Job:
    family = plan.family
    n = plan.n_qubits

    if family in ('qaoa', 'lr_qaoa'):
        inst = _maxcut_instance(plan, seed)
        if family == 'qaoa':
            degree = inst.regular_degree
            if degree is None:
                raise InvalidArgumentError("Fixed-angle QAOA needs a regular graph")
            angles = fixed_qaoa_angles(degree, depth)
        else:
            delta = float(plan.options.get('delta', 1.25))
            angles = lr_qaoa_schedule(LrRampParams(float(plan.options.get('delta_gamma', delta)),
                                                   float(plan.options.get('delta_beta', delta)), depth))
        c = gen_qaoa_maxcut(inst, angles)
        return _Job('optimization', f'{inst.name} p={depth}', family, [c],
                    lambda hists: approximation_ratio(hists[0], inst, family),
                    lambda hists, t_shot: best_cut_quality(hists[0], inst, t_shot))

    if family == 'cosine_qft':
        c, ref = gen_cosine_qft(n, plan.options.get('s'))
        return _Job('qft', f'cosine n={n}', family, [c], lambda hists: hellinger_score(hists[0], ref, family))

    if family == 'hidden_phase_qft':
        k_star = plan.options.get('k_star')
        if k_star is None:
            k_star = int(np.random.default_rng(seed).integers(2 ** (n // 2), 2 ** n))
        c, ref = gen_hidden_phase_qft(n, int(k_star))
        return _Job('qft', f'hidden_phase n={n} k={k_star}', family, [c],
                    lambda hists: hellinger_score(hists[0], ref, family))

    if family == 'hidden_shift':
        perm = plan.options.get('permutation', 'cx_ladder')
        pairs = gen_hidden_shift_challenge(n, perm, seed, int(plan.options.get('count', 50)))
        circuits = [c for c, _ in pairs]
        shifts = [s for _, s in pairs]
        return _Job('oracle', f'hsbp {perm} n={n}', family, circuits,
                    lambda hists: hidden_shift_challenge_score(hists, shifts),
                    lambda hists, t_shot: _hamming_quality_all(hists, shifts, t_shot))

    if family == 'faa':
        target = plan.options.get('target') or format_bits(
            int(np.random.default_rng(seed).integers(0, 2 ** n)), n)
        c = gen_faa(FaaSpec(n, target))
        p_max = faa_p_max(n)
        return _Job('search', f'faa n={n} target={target}', family, [c],
                    lambda hists: faa_score(hists[0], target, p_max))

    if family == 'mps':
        path = plan.instance_path or BenchConfig.data_path('test_image_32.pgm')
        if path.endswith('.json'):
            img = load_instance(path).payload()
            if not isinstance(img, ImageSpec):
                raise InvalidArgumentError(f"{path} is not an image instance")
        else:
            img = load_image(path, plan.options.get('size'))
        c = gen_mps_loading(img, depth)
        return _Job('image_loading', f'{os.path.basename(path)} D={depth}', family, [c],
                    lambda hists: mse_score(hists[0], img))

    if family == 'chemistry':
        path = plan.instance_path or BenchConfig.data_path('h002_chain_1_25.json')
        inst = load_instance(path).payload()
        if not isinstance(inst, ChemInstance):
            raise InvalidArgumentError(f"{path} is not a chemistry instance")
        circuits = list(gen_pucc_circuits(inst))
        return _Job('chemistry', inst.instance_name, 'vqe_puccd', circuits,
                    lambda hists: chem_energy(inst, hists[0], hists[1], hists[2])[1])

    raise UnsupportedFamilyError(f"Unknown family {family!r}")


def _ar_eff_row(plan: RunPlan, seed: int, shots: int, rows: List[BenchmarkResult],
                failures: List[RowFailure]) -> Optional[BenchmarkResult]:
    """Best AR over the depth rows of one (seed, shots) cell against the mean + 3 std random AR"""
    problem = f'lr_qaoa seed={seed} AR_eff'
    try:
        inst = _maxcut_instance(plan, seed)
        problem = f'{inst.name} AR_eff'
        batches = int(plan.options.get('baseline_batches', BenchConfig.AR_BASELINE_BATCHES))
        _, _, threshold = random_baseline(inst, shots, batches, _child_seed(seed, shots, batches))
        score = ar_eff([r.score for r in rows], threshold)
    except (BenchmarkError, OSError) as e:
        bench_logger.log_row_failed(plan.family, problem, str(e))
        failures.append(RowFailure(plan.family, problem, str(e)))
        return None
    bench_logger.log_score(plan.family, problem, score.value, score.passed)
    return BenchmarkResult(
        domain='optimization',
        problem=problem,
        algorithm='lr_qaoa_ar_eff',
        n_qubits=max(r.n_qubits for r in rows),
        n_circuits=sum(r.n_circuits for r in rows),
        n_1q=sum(r.n_1q for r in rows),
        n_2q=sum(r.n_2q for r in rows),
        shots=shots,
        backend=plan.backend.label,
        em=plan.em,
        score=score.value,
        exec_time_s=sum(r.exec_time_s for r in rows),
        energy_kwh=plan.energy_kwh,
    )


def quality_paths(path: str, count: int) -> List[str]:
    """One file per row: the path itself for a single row, else <stem>-<k><ext>"""
    if count == 1:
        return [path]
    stem, ext = os.path.splitext(path)
    return [f'{stem}-{k}{ext}' for k in range(1, count + 1)]


def write_quality_histograms(qualities: Sequence[QualityHistogram], path: str) -> List[str]:
    paths = quality_paths(path, len(qualities))
    for q, p in zip(qualities, paths):
        try:
            with open(p, 'w') as f:
                f.write(q.to_json())
        except OSError as e:
            bench_logger.log_error(f"Cannot write quality histogram {p}", e)
            raise
        bench_logger.log_report_written(p, 'quality', len(q.entries))
    return paths


def run_with_failures(plan: RunPlan) -> Tuple[List[BenchmarkResult], List[RowFailure]]:
    """Every (depth, seed, shots) row; rows that fail are collected, the run continues"""
    plan.validate()
    bench_logger.log_info('Run started', family=plan.family, backend=plan.backend.label,
                          rows=len(plan.depths) * len(plan.seeds) * len(plan.shots))
    results: List[BenchmarkResult] = []
    failures: List[RowFailure] = []
    qualities: List[QualityHistogram] = []
    ramp_rows: Dict[Tuple[int, int], List[BenchmarkResult]] = {}
    for depth in plan.depths:
        for seed in plan.seeds:
            for shots in plan.shots:
                problem = f'{plan.family} depth={depth} seed={seed}'
                try:
                    job = _build_job(plan, depth, seed)
                    problem = job.problem
                    hists = []
                    elapsed = 0.0
                    census = GateCensus()
                    for i, c in enumerate(job.circuits):
                        hist, dt = plan.backend.execute(c, shots, _child_seed(seed, depth, i))
                        hists.append(hist)
                        elapsed += dt
                        census = census + gate_census(c)
                    score = job.scorer(hists)
                    quality = None
                    if plan.out_quality:
                        t_shot = plan.options.get('t_shot') or max(elapsed, 1e-9) / (shots * len(hists))
                        quality = job.quality(hists, float(t_shot))
                except (BenchmarkError, OSError) as e:
                    bench_logger.log_row_failed(plan.family, problem, str(e))
                    failures.append(RowFailure(plan.family, problem, str(e)))
                    continue
                bench_logger.log_score(plan.family, problem, score.value, score.passed)
                row = BenchmarkResult(
                    domain=job.domain,
                    problem=problem,
                    algorithm=job.algorithm,
                    n_qubits=max(c.num_qubits for c in job.circuits),
                    n_circuits=len(job.circuits),
                    n_1q=census.n_1q,
                    n_2q=census.n_2q,
                    shots=shots,
                    backend=plan.backend.label,
                    em=plan.em,
                    score=score.value,
                    exec_time_s=elapsed,
                    energy_kwh=plan.energy_kwh,
                )
                results.append(row)
                if quality is not None:
                    qualities.append(quality)
                if plan.family == 'lr_qaoa':
                    ramp_rows.setdefault((seed, shots), []).append(row)
    for (seed, shots), rows in ramp_rows.items():
        summary = _ar_eff_row(plan, seed, shots, rows, failures)
        if summary is not None:
            results.append(summary)
    if plan.out_csv and results:
        emit_report(results, 'csv', plan.out_csv, append=True)
    if plan.out_jsonl and results:
        emit_report(results, 'jsonl', plan.out_jsonl, append=True)
    if plan.out_quality and qualities:
        write_quality_histograms(qualities, plan.out_quality)
    return results, failures


def run(plan: RunPlan) -> List[BenchmarkResult]:
    results, _ = run_with_failures(plan)
    return results


def demo_plans(shots: int = 1000, seed: int = 7) -> List[RunPlan]:
    """Small deterministic suite covering every family on the ideal simulator"""
    ideal = BackendRef('ideal_sim', 'ideal')
    return [
        RunPlan('qaoa', ideal, depths=[1, 2, 3], shots=[shots], seeds=[seed], n_qubits=8),
        RunPlan('lr_qaoa', ideal, depths=[1, 2], shots=[shots], seeds=[seed], n_qubits=6),
        RunPlan('cosine_qft', ideal, shots=[shots], seeds=[seed], n_qubits=4),
        RunPlan('hidden_phase_qft', ideal, shots=[shots], seeds=[seed], n_qubits=4),
        RunPlan('hidden_shift', ideal, shots=[shots], seeds=[seed], n_qubits=6),
        RunPlan('faa', ideal, shots=[shots], seeds=[seed], n_qubits=4),
        RunPlan('mps', ideal, depths=[1, 2], shots=[shots], seeds=[seed], options={'size': 8}),
        RunPlan('chemistry', ideal, shots=[shots], seeds=[seed], n_qubits=2),
    ]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(results: Sequence[BenchmarkResult], fmt: str, f, header: bool):
    if fmt == 'csv':
        writer = csv.writer(f, lineterminator='\n')
        if header:
            writer.writerow(REPORT_COLUMNS)
        for r in results:
            writer.writerow([_cell(v) for v in r.to_dict().values()])
    elif fmt == 'jsonl':
        for r in results:
            f.write(json.dumps(r.to_dict()) + '\n')
    else:
        f.write('| ' + ' | '.join(REPORT_COLUMNS) + ' |\n')
        f.write('|' + '---|' * len(REPORT_COLUMNS) + '\n')
        for r in results:
            f.write('| ' + ' | '.join(_cell(v) for v in r.to_dict().values()) + ' |\n')


def _append_rows(results: Sequence[BenchmarkResult], fmt: str, path: str):
    header = True
    if fmt == 'csv' and os.path.exists(path) and os.path.getsize(path) > 0:
        with open(path, newline='') as f:
            existing = next(csv.reader(f), [])
        if tuple(existing) != REPORT_COLUMNS:
            raise SchemaError(f"{path} has a different header; not appending", key='header')
        header = False
    with open(path, 'a', newline='') as f:
        _write_rows(results, fmt, f, header)


def emit_report(results: Sequence[BenchmarkResult], fmt: str, path: str, append: bool = False) -> str:
    """
    Write results as csv, jsonl or a markdown table; returns the path
    A fresh report replaces the file whole. With append, csv and jsonl rows go after
    the existing ones and the csv header is written once.
    """
    if not results:
        raise InvalidArgumentError("No results to report")
    if fmt not in REPORT_FORMATS:
        raise InvalidArgumentError(f"Unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")
    if append and fmt == 'markdown':
        raise InvalidArgumentError("Markdown reports cannot be appended to")
    try:
        if append:
            _append_rows(results, fmt, path)
        else:
            tmp = path + '.tmp'
            with open(tmp, 'w', newline='') as f:
                _write_rows(results, fmt, f, header=True)
            os.replace(tmp, path)
    except OSError as e:
        bench_logger.log_error(f"Cannot write report {path}", e)
        raise
    bench_logger.log_report_written(path, fmt, len(results))
    return path


def load_results_jsonl(path: str) -> List[BenchmarkResult]:
    results = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                results.append(BenchmarkResult.from_dict(json.loads(line)))
            except json.JSONDecodeError as e:
                raise SchemaError(f"{path}:{lineno} is not valid JSON: {e}")
    return results
