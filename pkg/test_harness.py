"""
Harness Tests for qbench
Graph instances, instance documents, benchmark runs, reports and the command line.
"""

import unittest
import io
import json
import os
import shutil
import sys
import tempfile
from contextlib import redirect_stdout

import numpy as np
from scipy.stats import chisquare

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from bench_config import BenchConfig
from circuit import gate_census
from errors import InvalidArgumentError, SchemaError, UnsupportedFamilyError
from generators import (ChemInstance, FaaSpec, MaxCutInstance, fixed_qaoa_angles, gen_faa,
                        gen_qaoa_maxcut)
from harness import (REPORT_COLUMNS, BackendRef, BenchmarkResult, ProblemInstanceDoc, RunPlan,
                     demo_plans, emit_report, gen_fcw_graph, gen_regular_graph, load_instance,
                     load_results_jsonl, maxcut_document, parse_backend, register_adapter, run,
                     run_with_failures, save_instance, _child_seed)
from scoring import random_baseline
from simulator import NoiseModel, ideal_distribution, sample
from tts import QualityHistogram
import qbench

IDEAL = BackendRef('ideal_sim', 'ideal')


def sample_result(**overrides):
    fields = dict(domain='optimization', problem='demo', algorithm='qaoa', n_qubits=8,
                  n_circuits=1, n_1q=16, n_2q=12, shots=5000, backend='ideal', em=False,
                  score=0.75, exec_time_s=0.01, energy_kwh=None)
    fields.update(overrides)
    return BenchmarkResult(**fields)


def strip_time(csv_text):
    column = REPORT_COLUMNS.index('exec_time_s')
    rows = [line.split(',') for line in csv_text.strip().split('\n')]
    return [row[:column] + row[column + 1:] for row in rows]


class ConfigTestCase(unittest.TestCase):
    """Environment-driven configuration."""

    def test_01_defaults_validate(self):
        """The bundled configuration is valid and points at the data directory."""
        is_valid, message = BenchConfig.validate()
        self.assertTrue(is_valid, message)
        self.assertTrue(os.path.exists(BenchConfig.data_path('fixed_qaoa_angles.json')))

    def test_02_qubit_cap_reread(self):
        """QBENCH_QUBIT_CAP is read on every call; junk falls back to the default."""
        previous = os.environ.get('QBENCH_QUBIT_CAP')
        try:
            os.environ['QBENCH_QUBIT_CAP'] = '7'
            self.assertEqual(BenchConfig.qubit_cap(), 7)
            self.assertEqual(BenchConfig.as_dict()['qubit_cap'], 7)
            os.environ['QBENCH_QUBIT_CAP'] = 'many'
            self.assertEqual(BenchConfig.qubit_cap(), BenchConfig.DEFAULT_QUBIT_CAP)
        finally:
            if previous is None:
                os.environ.pop('QBENCH_QUBIT_CAP', None)
            else:
                os.environ['QBENCH_QUBIT_CAP'] = previous


class GraphTestCase(unittest.TestCase):
    """Random graph instances."""

    def test_01_regular_graph(self):
        """n = 8, d = 3 gives 12 unit edges with every degree 3."""
        inst = gen_regular_graph(8, 3, seed=4)
        self.assertEqual(len(inst.edges), 12)
        self.assertEqual(inst.degrees(), [3] * 8)
        self.assertTrue(all(w == 1.0 for _, _, w in inst.edges))
        self.assertEqual(inst.regular_degree, 3)

    def test_02_regular_graph_seeded(self):
        """The same seed gives the same edge set."""
        self.assertEqual(gen_regular_graph(10, 4, seed=7).edges, gen_regular_graph(10, 4, seed=7).edges)

    def test_03_regular_graph_parity(self):
        """n * d odd or d >= n raises invalid-argument."""
        with self.assertRaises(InvalidArgumentError):
            gen_regular_graph(5, 3, seed=1)
        with self.assertRaises(InvalidArgumentError):
            gen_regular_graph(4, 4, seed=1)

    def test_04_fcw_graph(self):
        """n = 12 gives 66 edges with weights in (0, 1], seed-deterministic."""
        inst = gen_fcw_graph(12, seed=3)
        self.assertEqual(len(inst.edges), 66)
        self.assertTrue(all(0.0 < w <= 1.0 for _, _, w in inst.edges))
        self.assertEqual(inst.edges, gen_fcw_graph(12, seed=3).edges)
        with self.assertRaises(InvalidArgumentError):
            gen_fcw_graph(1)


class InstanceDocumentTestCase(unittest.TestCase):
    """Instance documents on disk."""

    @classmethod
    def setUpClass(cls):
        cls.temp_dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.temp_dir)

    def test_01_chemistry_listing(self):
        """The bundled H2 document loads as a 6-term chemistry instance."""
        doc = load_instance(BenchConfig.data_path('h002_chain_1_25.json'))
        inst = doc.payload()
        self.assertIsInstance(inst, ChemInstance)
        self.assertEqual(len(inst.paired_hamiltonian), 6)
        self.assertEqual(inst.reference_energy_doci, -1.045783144549802)
        self.assertEqual(doc.solution_algorithms, ['vqe_puccd'])

    def test_02_missing_key(self):
        """A document without num_qubits is a schema error naming the key."""
        with open(BenchConfig.data_path('h002_chain_1_25.json')) as f:
            raw = json.load(f)
        del raw['num_qubits']
        path = os.path.join(self.temp_dir, 'broken.json')
        with open(path, 'w') as f:
            json.dump(raw, f)
        with self.assertRaises(SchemaError) as ctx:
            load_instance(path)
        self.assertEqual(ctx.exception.key, 'num_qubits')

    def test_03_round_trip(self):
        """save_instance then load_instance preserves every field."""
        doc = maxcut_document(gen_regular_graph(6, 3, seed=2))
        path = os.path.join(self.temp_dir, 'maxcut.json')
        save_instance(doc, path)
        loaded = load_instance(path)
        self.assertEqual(loaded.to_dict(), doc.to_dict())
        self.assertIsInstance(loaded.payload(), MaxCutInstance)

    def test_04_unknown_family(self):
        """Unknown categories raise unsupported-family."""
        doc = ProblemInstanceDoc('finance', 'portfolio', 'p1', ['qaoa'], 4, {})
        with self.assertRaises(UnsupportedFamilyError):
            doc.payload()

    def test_05_num_qubits_consistency(self):
        """num_qubits must agree with the payload."""
        doc = maxcut_document(gen_regular_graph(6, 3, seed=2))
        doc.num_qubits = 7
        with self.assertRaises(SchemaError):
            doc.payload()

    def test_06_image_document(self):
        """Image payloads carry their pixels."""
        doc = ProblemInstanceDoc('image_loading', 'mps', 'ramp', ['mps'], 4,
                                 {'pixels': np.arange(1, 17).reshape(4, 4).tolist()})
        self.assertEqual(doc.payload().num_qubits, 4)


class RunTestCase(unittest.TestCase):
    """Benchmark orchestration."""

    @classmethod
    def setUpClass(cls):
        cls.temp_dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.temp_dir)

    def test_01_qaoa_rows(self):
        """8-vertex 3-regular QAOA at p = 1, 2 gives census (16,12) and (24,24)."""
        plan = RunPlan('qaoa', IDEAL, depths=[1, 2], shots=[5000], seeds=[11], n_qubits=8)
        results = run(plan)
        self.assertEqual(len(results), 2)
        self.assertEqual([(r.n_1q, r.n_2q) for r in results], [(16, 12), (24, 24)])
        for r in results:
            self.assertEqual(r.shots, 5000)
            self.assertEqual(r.n_circuits, 1)
            self.assertGreater(r.score, 0.5)

    def test_02_census_matches_regenerated_circuits(self):
        """Each row's census equals that of the regenerated circuit."""
        plan = RunPlan('qaoa', IDEAL, depths=[3], shots=[100], seeds=[5], n_qubits=8)
        row = run(plan)[0]
        c = gen_qaoa_maxcut(gen_regular_graph(8, 3, 5), fixed_qaoa_angles(3, 3))
        self.assertEqual((row.n_1q, row.n_2q), gate_census(c).as_tuple())

    def test_03_hidden_shift_ideal(self):
        """Hidden shift on the ideal simulator scores 1.0 on every row."""
        plan = RunPlan('hidden_shift', IDEAL, shots=[200], seeds=[1, 2], n_qubits=6)
        results = run(plan)
        self.assertEqual(len(results), 2)
        for r in results:
            self.assertEqual(r.score, 1.0)
            self.assertEqual(r.n_circuits, 10)

    def test_04_random_sampler_cosine(self):
        """Uniform sampling leaves the 12-qubit cosine score near 2 / 4096."""
        plan = RunPlan('cosine_qft', BackendRef('random_sampler', 'random'), shots=[5000],
                       seeds=[3], n_qubits=12)
        row = run(plan)[0]
        self.assertEqual(row.backend, 'random')
        self.assertLess(row.score, 0.005)

    def test_05_backend_failure_keeps_going(self):
        """A failing backend produces failure records, not an aborted run."""
        plan = RunPlan('cosine_qft', parse_backend('external:not-registered'), depths=[1],
                       seeds=[1, 2], shots=[10], n_qubits=4)
        results, failures = run_with_failures(plan)
        self.assertEqual(results, [])
        self.assertEqual(len(failures), 2)

    def test_06_external_adapter(self):
        """A registered adapter returning interchange JSON is scored like any backend."""
        register_adapter('always-target', lambda c, shots, seed: json.dumps(
            {'shots': shots, 'counts': {'0111': shots // 2, '1001': shots - shots // 2}}))
        plan = RunPlan('cosine_qft', parse_backend('external:always-target'), shots=[100],
                       seeds=[1], n_qubits=4, options={'s': 7})
        row = run(plan)[0]
        self.assertAlmostEqual(row.score, 1.0, places=12)

    def test_07_invalid_plan(self):
        """Empty grids and unknown families abort before execution."""
        with self.assertRaises(InvalidArgumentError):
            run(RunPlan('qaoa', IDEAL, depths=[]))
        with self.assertRaises(UnsupportedFamilyError):
            run(RunPlan('teleport', IDEAL))

    def test_08_parse_backend(self):
        """Backend strings map to backend kinds."""
        self.assertEqual(parse_backend('ideal').kind, 'ideal_sim')
        noisy = parse_backend('noisy:0.001,0.01')
        self.assertEqual(noisy.noise, NoiseModel(0.001, 0.01))
        self.assertEqual(parse_backend('random').kind, 'random_sampler')
        with self.assertRaises(InvalidArgumentError):
            parse_backend('noisy:0.1')
        with self.assertRaises(InvalidArgumentError):
            parse_backend('qpu')

    def test_09_missing_instance_file(self):
        """A plan naming an instance file that does not exist is rejected up front."""
        plan = RunPlan('qaoa', IDEAL, instance_path=os.path.join(self.temp_dir, 'absent.json'))
        with self.assertRaises(InvalidArgumentError):
            run(plan)

    def test_10_unreadable_instance_becomes_failure(self):
        """An I/O error while loading an instance fails the row without aborting the run."""
        plan = RunPlan('chemistry', IDEAL, shots=[50], seeds=[1, 2], instance_path=self.temp_dir)
        results, failures = run_with_failures(plan)
        self.assertEqual(results, [])
        self.assertEqual(len(failures), 2)

    def test_11_lr_qaoa_ar_eff_row(self):
        """A linear-ramp sweep ends with an AR_eff row against the mean + 3 std random AR."""
        plan = RunPlan('lr_qaoa', IDEAL, depths=[1, 2, 3], shots=[500], seeds=[3], n_qubits=6)
        results = run(plan)
        self.assertEqual(len(results), 4)
        depth_rows, summary = results[:3], results[3]
        self.assertEqual([r.algorithm for r in depth_rows], ['lr_qaoa'] * 3)
        self.assertEqual(summary.algorithm, 'lr_qaoa_ar_eff')
        self.assertTrue(summary.problem.endswith('AR_eff'))
        self.assertEqual(summary.n_2q, sum(r.n_2q for r in depth_rows))
        self.assertEqual(summary.n_circuits, 3)
        batches = BenchConfig.AR_BASELINE_BATCHES
        _, _, threshold = random_baseline(gen_fcw_graph(6, 3), 500, batches, _child_seed(3, 500, batches))
        expected = (max(r.score for r in depth_rows) - threshold) / (1 - threshold)
        self.assertAlmostEqual(summary.score, expected, places=12)

    def test_12_quality_histograms(self):
        """Quality output holds one file per row, each weighing every shot."""
        path = os.path.join(self.temp_dir, 'ar.json')
        plan = RunPlan('qaoa', IDEAL, depths=[1, 2], shots=[400], seeds=[5], out_quality=path,
                       options={'t_shot': 0.001})
        run(plan)
        for expected in ('ar-1.json', 'ar-2.json'):
            with open(os.path.join(self.temp_dir, expected)) as f:
                q = QualityHistogram.from_json(f.read())
            self.assertEqual(q.total, 400)
            self.assertEqual(q.t_shot, 0.001)
            self.assertLessEqual(max(quality for quality, _ in q.entries), 1.0)
        single = os.path.join(self.temp_dir, 'hs.json')
        run(RunPlan('hidden_shift', IDEAL, shots=[100], seeds=[1], n_qubits=6, out_quality=single))
        with open(single) as f:
            q = QualityHistogram.from_json(f.read())
        self.assertEqual(q.total, 100 * BenchConfig.HIDDEN_SHIFT_CIRCUITS)
        self.assertEqual(q.entries, [(1.0, 100.0 * BenchConfig.HIDDEN_SHIFT_CIRCUITS)])

    def test_13_quality_needs_per_shot_metric(self):
        """Families without a per-shot quality reject a quality output path."""
        with self.assertRaises(InvalidArgumentError):
            run(RunPlan('cosine_qft', IDEAL, n_qubits=4, out_quality=os.path.join(self.temp_dir, 'c.json')))

    def test_14_repeated_runs_append(self):
        """Running twice into the same outputs keeps both runs' rows under one header."""
        csv_path = os.path.join(self.temp_dir, 'twice.csv')
        jsonl_path = os.path.join(self.temp_dir, 'twice.jsonl')
        plan = RunPlan('faa', IDEAL, shots=[100], seeds=[1, 2], n_qubits=4,
                       out_csv=csv_path, out_jsonl=jsonl_path)
        run(plan)
        run(plan)
        with open(csv_path) as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 5)
        self.assertEqual(lines.count(','.join(REPORT_COLUMNS)), 1)
        self.assertEqual(len(load_results_jsonl(jsonl_path)), 4)


class BackendAgreementTestCase(unittest.TestCase):
    """Backends that sample the same distribution agree statistically."""

    SHOTS = 20000

    @classmethod
    def setUpClass(cls):
        cls.circuit = gen_faa(FaaSpec(4, '0110'))
        cls.reference = ideal_distribution(cls.circuit)

    def chi_square_p(self, hist):
        probs = dict(self.reference.items())
        self.assertTrue(set(hist.counts) <= set(probs))
        keys = [k for k, p in probs.items() if p * hist.shots >= 5]
        observed = [hist.counts.get(k, 0) for k in keys]
        expected = [probs[k] * hist.shots for k in keys]
        rest_observed = hist.shots - sum(observed)
        rest_expected = hist.shots - sum(expected)
        if rest_expected >= 5:
            observed.append(rest_observed)
            expected.append(rest_expected)
        expected = np.array(expected) * sum(observed) / sum(expected)
        return chisquare(observed, expected).pvalue

    def test_01_external_adapter_matches_ideal(self):
        """An adapter replaying the ideal distribution passes a chi-square test against it."""
        register_adapter('ideal-replay', lambda c, shots, seed: sample(
            ideal_distribution(c), shots, seed + 1).to_json())
        backend = BackendRef('external', 'replay', adapter='ideal-replay')
        hist, _ = backend.execute(self.circuit, self.SHOTS, 5)
        self.assertEqual(hist.shots, self.SHOTS)
        self.assertGreater(self.chi_square_p(hist), 1e-3)

    def test_02_noiseless_noisy_backend_matches_ideal(self):
        """The noisy simulator at zero error rates is statistically the ideal one."""
        backend = BackendRef('noisy_sim', 'p=0', NoiseModel(0.0, 0.0))
        hist, _ = backend.execute(self.circuit, self.SHOTS, 9)
        self.assertGreater(self.chi_square_p(hist), 1e-3)


class NoiseTrendTestCase(unittest.TestCase):
    """Scores fall as two-qubit noise grows."""

    def mean_score(self, family, p2):
        backend = BackendRef('noisy_sim', f'p2={p2}', NoiseModel(0.0, p2))
        plan = RunPlan(family, backend, shots=[200], seeds=list(range(20)), n_qubits=8)
        results = run(plan)
        self.assertEqual(len(results), 20)
        return float(np.mean([r.score for r in results]))

    def test_01_hidden_shift(self):
        """Hidden-shift score strictly decreases over p2 = 0, 0.002, 0.01."""
        scores = [self.mean_score('hidden_shift', p2) for p2 in (0.0, 0.002, 0.01)]
        self.assertGreater(scores[0], scores[1])
        self.assertGreater(scores[1], scores[2])

    def test_02_cosine_qft(self):
        """Cosine QFT score strictly decreases over p2 = 0, 0.002, 0.01."""
        scores = [self.mean_score('cosine_qft', p2) for p2 in (0.0, 0.002, 0.01)]
        self.assertGreater(scores[0], scores[1])
        self.assertGreater(scores[1], scores[2])


class ReportTestCase(unittest.TestCase):
    """Report emission."""

    @classmethod
    def setUpClass(cls):
        cls.temp_dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.temp_dir)

    def test_01_csv_header(self):
        """One result gives a header plus one row; missing energy is an empty field."""
        path = emit_report([sample_result()], 'csv', os.path.join(self.temp_dir, 'one.csv'))
        with open(path) as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 2)
        self.assertEqual(lines[0], 'domain,problem,algorithm,n_qubits,n_circuits,n_1q,n_2q,'
                                   'shots,backend,em,score,exec_time_s,energy_kwh')
        self.assertTrue(lines[1].endswith(','))

    def test_02_jsonl_round_trip(self):
        """jsonl rows parse back and re-emit identically."""
        results = [sample_result(), sample_result(problem='other', score=0.5, energy_kwh=1.5, em=True)]
        first = emit_report(results, 'jsonl', os.path.join(self.temp_dir, 'a.jsonl'))
        loaded = load_results_jsonl(first)
        self.assertEqual(loaded, results)
        second = emit_report(loaded, 'jsonl', os.path.join(self.temp_dir, 'b.jsonl'))
        with open(first) as f1, open(second) as f2:
            self.assertEqual(f1.read(), f2.read())

    def test_03_markdown(self):
        """The markdown table has the report columns and one line per row."""
        path = emit_report([sample_result(), sample_result()], 'markdown',
                           os.path.join(self.temp_dir, 'r.md'))
        with open(path) as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 4)
        for column in REPORT_COLUMNS:
            self.assertIn(column, lines[0])

    def test_04_empty_and_bad_format(self):
        """No results or an unknown format raise invalid-argument."""
        with self.assertRaises(InvalidArgumentError):
            emit_report([], 'csv', os.path.join(self.temp_dir, 'x.csv'))
        with self.assertRaises(InvalidArgumentError):
            emit_report([sample_result()], 'xml', os.path.join(self.temp_dir, 'x.xml'))

    def test_05_unwritable_path(self):
        """Writing into a missing directory raises an I/O error."""
        with self.assertRaises(OSError):
            emit_report([sample_result()], 'csv', os.path.join(self.temp_dir, 'missing', 'r.csv'))

    def test_06_demo_is_deterministic(self):
        """The demo suite emits identical CSV twice, ignoring execution time."""
        outputs = []
        for attempt in range(2):
            results = []
            for plan in demo_plans(shots=200, seed=7):
                results.extend(run(plan))
            path = emit_report(results, 'csv', os.path.join(self.temp_dir, f'demo{attempt}.csv'))
            with open(path) as f:
                outputs.append(strip_time(f.read()))
        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(len(outputs[0]) - 1, 13)

    def test_07_append_rules(self):
        """Appending refuses markdown and csv files whose header differs."""
        with self.assertRaises(InvalidArgumentError):
            emit_report([sample_result()], 'markdown', os.path.join(self.temp_dir, 'a.md'), append=True)
        foreign = os.path.join(self.temp_dir, 'foreign.csv')
        with open(foreign, 'w') as f:
            f.write('name,value\nx,1\n')
        with self.assertRaises(SchemaError):
            emit_report([sample_result()], 'csv', foreign, append=True)
        with open(foreign) as f:
            self.assertEqual(f.read(), 'name,value\nx,1\n')

    def test_08_fresh_report_replaces_file(self):
        """A non-appending report overwrites the file and leaves no temporary behind."""
        path = os.path.join(self.temp_dir, 'fresh.csv')
        emit_report([sample_result(), sample_result()], 'csv', path)
        emit_report([sample_result()], 'csv', path)
        with open(path) as f:
            self.assertEqual(len(f.read().splitlines()), 2)
        self.assertFalse(os.path.exists(path + '.tmp'))


class CliTestCase(unittest.TestCase):
    """qbench command line."""

    @classmethod
    def setUpClass(cls):
        cls.temp_dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.temp_dir)

    def call(self, *argv):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = qbench.main(list(argv))
        return code, buffer.getvalue()

    def test_01_parse_grid(self):
        """Ranges and comma lists."""
        self.assertEqual(qbench.parse_grid('1..3'), [1, 2, 3])
        self.assertEqual(qbench.parse_grid('2,5'), [2, 5])
        self.assertEqual(qbench.parse_grid('0.5..1.0', float, 3), [0.5, 0.75, 1.0])
        with self.assertRaises(InvalidArgumentError):
            qbench.parse_grid('a..b')

    def test_02_list(self):
        """list prints every family."""
        code, out = self.call('list')
        self.assertEqual(code, 0)
        self.assertIn('hidden_shift', out)

    def test_03_gen_then_run(self):
        """gen writes a MaxCut document that run can use."""
        inst_path = os.path.join(self.temp_dir, 'g.json')
        out_path = os.path.join(self.temp_dir, 'g.csv')
        code, _ = self.call('gen', '--family', 'qaoa', '--n', '6', '--seed', '3', '--out', inst_path)
        self.assertEqual(code, 0)
        code, out = self.call('run', '--family', 'qaoa', '--instance', inst_path, '--depths', '1..2',
                              '--shots', '300', '--out', out_path)
        self.assertEqual(code, 0)
        with open(out_path) as f:
            self.assertEqual(len(f.read().splitlines()), 3)

    def test_04_run_failure_exit_code(self):
        """Failed rows give a non-zero exit code."""
        code, out = self.call('run', '--family', 'cosine_qft', '--n', '4', '--backend', 'external:nobody')
        self.assertEqual(code, 1)
        self.assertIn('❌', out)

    def test_05_bad_backend(self):
        """Invalid backends are reported, not raised."""
        code, out = self.call('run', '--family', 'faa', '--backend', 'noisy:x')
        self.assertEqual(code, 1)
        self.assertIn('❌', out)

    def test_06_score_external_histogram(self):
        """score reads an interchange histogram and prints the family score."""
        hist_path = os.path.join(self.temp_dir, 'hs.json')
        with open(hist_path, 'w') as f:
            json.dump({'shots': 10, 'counts': {'1011': 10}}, f)
        code, out = self.call('score', '--family', 'hidden_shift', '--hist', hist_path, '--target', '1011')
        self.assertEqual(code, 0)
        self.assertIn('1.000000000', out)

    def test_07_tts_table(self):
        """tts prints one line per threshold."""
        path = os.path.join(self.temp_dir, 'q.json')
        with open(path, 'w') as f:
            json.dump({'t_shot_s': 0.5, 'entries': [[0.5, 50], [1.0, 50]]}, f)
        code, out = self.call('tts', '--hist', path, '--thresholds', '0.5,1.0')
        self.assertEqual(code, 0)
        self.assertIn('1.0000', out)

    def test_08_report(self):
        """report converts jsonl results to markdown."""
        src = emit_report([sample_result()], 'jsonl', os.path.join(self.temp_dir, 'res.jsonl'))
        code, _ = self.call('report', '--in', src, '--format', 'markdown')
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(os.path.join(self.temp_dir, 'res.md')))

    def test_09_score_needs_instance(self):
        """Scoring QAOA without an instance document is a reported error."""
        hist_path = os.path.join(self.temp_dir, 'cut.json')
        with open(hist_path, 'w') as f:
            json.dump({'shots': 10, 'counts': {'0101': 10}}, f)
        code, out = self.call('score', '--family', 'qaoa', '--hist', hist_path)
        self.assertEqual(code, 1)
        self.assertIn('--instance is required', out)

    def test_10_run_quality_then_tts(self):
        """run writes a quality histogram that tts compares with a baseline and extrapolates."""
        q_path = os.path.join(self.temp_dir, 'hs_quality.json')
        code, _ = self.call('run', '--family', 'hidden_shift', '--n', '6', '--shots', '100', '--seed', '1',
                            '--quality-out', q_path)
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(q_path))
        code, out = self.call('tts', '--hist', q_path, '--thresholds', '0.5..1.0', '--steps', '6',
                              '--baseline', 'hamming', '--bits', '6', '--extrapolate', '1.0')
        self.assertEqual(code, 0)
        self.assertIn('q_base', out)
        self.assertIn('0.015625', out)
        self.assertIn('ln TTS_c', out)

    def test_11_tts_random_ar_baseline(self):
        """The random-ar baseline enumerates the MaxCut instance given with --instance."""
        inst_path = os.path.join(self.temp_dir, 'cube.json')
        self.call('gen', '--family', 'qaoa', '--n', '6', '--seed', '2', '--out', inst_path)
        q_path = os.path.join(self.temp_dir, 'perfect.json')
        with open(q_path, 'w') as f:
            json.dump({'t_shot_s': 0.001, 'entries': [[1.0, 10]]}, f)
        code, out = self.call('tts', '--hist', q_path, '--thresholds', '1.0', '--baseline', 'random-ar',
                              '--instance', inst_path)
        self.assertEqual(code, 0)
        self.assertIn('TTS_base', out)
        code, out = self.call('tts', '--hist', q_path, '--baseline', 'random-ar')
        self.assertEqual(code, 1)
        self.assertIn('❌', out)


if __name__ == '__main__':
    unittest.main()
