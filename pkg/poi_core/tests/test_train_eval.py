import io
import json
import math

from unittest import mock

import numpy as np

from django.test import SimpleTestCase

from poi_core.exceptions import ConfigurationError, DivergenceDetected
from poi_core.ingest import SplitDataset
from poi_core.ingest.exceptions import EmptyTrain
from poi_core.model.layers import LossBreakdown
from poi_core.model.inputs import time_of_day
from poi_core.nn import Tensor
from poi_core.nn.exceptions import IndexOutOfRange
from poi_core.train_eval import TrainConfig, build_model, evaluate, train
from poi_core.train_eval.examples import make_example, make_training_examples, pad_batch, make_batches
from poi_core.train_eval.exceptions import EmptyRanks, NoValidSamples
from poi_core.train_eval.metrics import MetricsReport, rank_of_target, acc_at_k, mrr
from poi_core.train_eval.sweep import sweep, write_table
from poi_core.tests.data_generator import SyntheticDataTestCase
from poi_core.tests.factories import build_trajectory


SMALL_MODEL = {'user_dim': 4, 'timecat_dim': 4, 'heads': 2, 'layers': 1, 'ffn_dim': 8, 'gcn_hidden': [8]}

POI_CATEGORIES = np.arange(12) % 3


class ExamplesTestCase(SimpleTestCase):

    def test_shortest_trajectory_should_give_one_position(self):
        example = make_example(build_trajectory(0, [3, 7]), POI_CATEGORIES)
        np.testing.assert_array_equal(example.pois, [3])
        np.testing.assert_array_equal(example.target_pois, [7])
        np.testing.assert_array_equal(example.target_categories, [1])

    def test_targets_should_be_shifted_inputs(self):
        example = make_example(build_trajectory(2, [0, 1, 2, 3, 4], start=8), POI_CATEGORIES)
        np.testing.assert_array_equal(example.pois, [0, 1, 2, 3])
        np.testing.assert_array_equal(example.target_pois, [1, 2, 3, 4])
        np.testing.assert_array_equal(example.categories, [0, 1, 2, 0])
        np.testing.assert_allclose(example.times, [8 / 24.0, 9 / 24.0, 10 / 24.0, 11 / 24.0])
        np.testing.assert_allclose(example.target_times, [9 / 24.0, 10 / 24.0, 11 / 24.0, 12 / 24.0])
        self.assertEqual(example.user, 2)

    def test_interval_target_should_be_fraction_of_window(self):
        example = make_example(build_trajectory(0, [0, 1, 2], step=6), POI_CATEGORIES, time_target='interval',
                               window_hours=24)
        np.testing.assert_allclose(example.target_times, [0.25, 0.25])

    def test_long_trajectory_should_keep_latest_transitions(self):
        example = make_example(build_trajectory(0, [0, 1, 2, 3, 4, 5]), POI_CATEGORIES, max_seq_len=3)
        np.testing.assert_array_equal(example.pois, [2, 3, 4])
        np.testing.assert_array_equal(example.target_pois, [3, 4, 5])

    def test_batch_should_pad_to_longest_member(self):
        examples = make_training_examples([build_trajectory(0, [0, 1, 2]), build_trajectory(1, [5, 6, 7, 8])],
                                          POI_CATEGORIES)
        batch = pad_batch(examples)
        self.assertEqual(batch.mask.shape, (2, 3))
        np.testing.assert_array_equal(batch.mask, [[True, True, False], [True, True, True]])
        self.assertEqual(batch.n_positions, 5)
        np.testing.assert_array_equal(batch.users[1], [1, 1, 1])
        np.testing.assert_array_equal(batch.target_pois[0], [1, 2, 0])

    def test_batches_should_cover_all_examples(self):
        examples = make_training_examples([build_trajectory(0, [0, 1])] * 5, POI_CATEGORIES)
        self.assertEqual([len(batch) for batch in make_batches(examples, 2)], [2, 2, 1])


class MetricsTestCase(SimpleTestCase):

    def test_rank_should_count_higher_scores(self):
        self.assertEqual(rank_of_target([3.0, 1.0, 2.0], 2), 2)
        self.assertEqual(rank_of_target([3.0, 1.0, 2.0], 0), 1)
        self.assertEqual(rank_of_target([3.0, 1.0, 2.0], 1), 3)

    def test_ties_should_be_broken_by_lower_index(self):
        self.assertEqual(rank_of_target([0.5, 0.5, 0.5, 0.5], 2), 3)
        self.assertEqual(rank_of_target([0.5, 0.5, 0.5, 0.5], 0), 1)

    def test_target_out_of_range_should_raise_error(self):
        with self.assertRaises(IndexOutOfRange):
            rank_of_target([1.0, 2.0], 2)

    def test_hand_computed_metrics(self):
        self.assertAlmostEqual(mrr([1, 2, 4]), 0.5833333333333334, places=12)
        self.assertEqual(acc_at_k([5, 5], 4), 0.0)
        self.assertEqual(acc_at_k([1, 2, 4], 2), 2 / 3.0)

    def test_metrics_should_match_brute_force(self):
        random_state = np.random.RandomState(8)
        for _ in range(100):
            ranks = [int(rank) for rank in random_state.randint(1, 30, size=random_state.randint(1, 40))]
            for k in (1, 5, 10, 20):
                self.assertAlmostEqual(acc_at_k(ranks, k), sum(1 for rank in ranks if rank <= k) / len(ranks),
                                       places=12)
            self.assertAlmostEqual(mrr(ranks), sum(1.0 / rank for rank in ranks) / len(ranks), places=12)

            report = MetricsReport.from_ranks(ranks, [20, 1, 10, 5])
            values = list(report.acc_at.values())
            self.assertEqual(list(report.acc_at.keys()), [1, 5, 10, 20])
            self.assertEqual(values, sorted(values))
            self.assertGreaterEqual(report.mrr, report.acc_at[1])
            self.assertLessEqual(report.mrr, 1.0)

    def test_random_scores_should_rank_near_chance(self):
        random_state = np.random.RandomState(9)
        n_pois, n_samples = 50, 2000
        ranks = [rank_of_target(random_state.normal(size=n_pois), int(random_state.randint(n_pois)))
                 for _ in range(n_samples)]
        expected = 5.0 / n_pois
        self.assertLess(abs(acc_at_k(ranks, 5) - expected), 4 * math.sqrt(expected * (1 - expected) / n_samples))

    def test_invalid_ranks_should_raise_error(self):
        with self.assertRaises(EmptyRanks):
            mrr([])
        with self.assertRaises(EmptyRanks):
            acc_at_k([], 1)
        with self.assertRaises(ValueError):
            mrr([0, 1])

    def test_report_should_serialize_k_as_string(self):
        report = MetricsReport.from_ranks([1, 3], [1, 5], alpha=0.33, beta=0.5)
        self.assertEqual(report.as_dict(), {'acc_at': {'1': 0.5, '5': 1.0}, 'mrr': 2 / 3.0, 'n_samples': 2,
                                            'alpha': 0.33, 'beta': 0.5})


class TrainConfigTestCase(SimpleTestCase):

    def test_invalid_values_should_raise_error(self):
        with self.assertRaises(ConfigurationError):
            TrainConfig(epochs=0)
        with self.assertRaises(ConfigurationError):
            TrainConfig(batch_size=0)
        with self.assertRaises(ConfigurationError):
            TrainConfig(learning_rate=-1e-3)

    def test_zero_learning_rate_should_be_accepted(self):
        self.assertEqual(TrainConfig(learning_rate=0.0).learning_rate, 0.0)

    def test_unknown_optimizer_should_raise_error(self):
        with self.assertRaises(ConfigurationError):
            TrainConfig(optimizer='poi_core.nn.optim.Missing').get_optimizer([])


class TrainTestCase(SyntheticDataTestCase, SimpleTestCase):

    n_trajectories = 80

    def get_model(self, seed=42):
        return build_model(self.processed.split, self.processed.id_maps, model_options=SMALL_MODEL, seed=seed)

    def test_zero_learning_rate_should_keep_parameters(self):
        model = self.get_model()
        before = model.state_dict()
        train(model, self.processed.split, TrainConfig(epochs=2, learning_rate=0.0))
        for name, value in model.state_dict().items():
            np.testing.assert_array_equal(value, before[name])

    def test_training_should_be_deterministic(self):
        results = []
        for _ in range(2):
            results.append(train(self.get_model(), self.processed.split,
                                 TrainConfig(epochs=2, batch_size=8, learning_rate=1e-2, seed=5)))
        self.assertEqual(results[0].losses, results[1].losses)
        for name, value in results[0].model.state_dict().items():
            np.testing.assert_array_equal(value, results[1].model.state_dict()[name])

    def test_best_validation_epoch_should_be_restored(self):
        split = self.processed.split
        self.assertTrue(split.validation)
        log = io.StringIO()
        result = train(self.get_model(), split, TrainConfig(epochs=3, batch_size=8, learning_rate=1e-2), log,
                       k_list=[1, 5])
        val_mrrs = [record['val_mrr'] for record in result.trace]
        self.assertEqual(result.best_epoch, val_mrrs.index(max(val_mrrs)) + 1)
        self.assertEqual(evaluate(result.model, split.validation, [1, 5]).mrr, max(val_mrrs))

        records = [json.loads(line) for line in log.getvalue().splitlines()]
        self.assertEqual([record['epoch'] for record in records], [1, 2, 3])
        self.assertEqual(set(records[0].keys()), {'epoch', 'mean_loss', 'val_mrr'})

    def test_empty_validation_should_keep_last_epoch(self):
        split = SplitDataset(self.processed.split.train, [], self.processed.split.test)
        result = train(self.get_model(), split, TrainConfig(epochs=2, learning_rate=1e-2))
        self.assertEqual(result.best_epoch, 2)
        self.assertIsNone(result.trace[-1]['val_mrr'])

    def test_non_finite_loss_should_raise_divergence(self):
        model = self.get_model()
        nan = Tensor(float('nan'))
        with mock.patch.object(model, 'batch_loss', return_value=LossBreakdown(nan, nan, nan, nan)):
            with self.assertRaises(DivergenceDetected) as context:
                train(model, self.processed.split, TrainConfig(epochs=1))
        self.assertEqual(context.exception.epoch, 1)

    def test_empty_train_should_raise_error(self):
        with self.assertRaises(EmptyTrain):
            train(self.get_model(), SplitDataset([], [], []))

    def test_evaluation_units(self):
        model = self.get_model()
        test = self.processed.split.test
        positions = sum(len(trajectory.checkins) - 1 for trajectory in test)
        self.assertEqual(evaluate(model, test, [1], 'position').n_samples, positions)
        self.assertEqual(evaluate(model, test, [1], 'trajectory_last').n_samples, len(test))
        with self.assertRaises(ConfigurationError):
            evaluate(model, test, [1], 'user')

    def test_evaluation_should_match_brute_force_ranking(self):
        model = self.get_model()
        trajectories = self.processed.split.test[:3]
        self.assertEqual(len(trajectories), 3)
        poi_embeddings, phi = model.poi_embeddings(), model.transition_attention()
        ranks, last_ranks = [], []
        for trajectory in trajectories:
            inputs, targets = trajectory.checkins[:-1], [checkin.poi for checkin in trajectory.checkins[1:]]
            pois = np.array([checkin.poi for checkin in inputs])
            logits = model.sequence_forward(pois, np.full(len(pois), trajectory.user),
                                            model.graph.poi_categories[pois],
                                            np.array([time_of_day(checkin) for checkin in inputs]),
                                            poi_embeddings, phi)[0].data
            for scores, target in zip(logits, targets):
                ordering = sorted(range(len(scores)), key=lambda poi: (-scores[poi], poi))
                ranks.append(ordering.index(target) + 1)
            last_ranks.append(ranks[-1])

        for unit, expected_ranks in (('position', ranks), ('trajectory_last', last_ranks)):
            report = evaluate(model, trajectories, [1, 5, 10], unit)
            self.assertEqual(report.n_samples, len(expected_ranks))
            for k in (1, 5, 10):
                self.assertAlmostEqual(report.acc_at[k], sum(rank <= k for rank in expected_ranks) /
                                       len(expected_ranks), places=12)
            self.assertAlmostEqual(report.mrr, sum(1.0 / rank for rank in expected_ranks) / len(expected_ranks),
                                   places=12)

    def test_evaluation_without_samples_should_raise_error(self):
        with self.assertRaises(NoValidSamples):
            evaluate(self.get_model(), [])


class LearningTestCase(SyntheticDataTestCase, SimpleTestCase):

    def test_model_should_learn_deterministic_transitions(self):
        split = self.processed.split
        model = build_model(split, self.processed.id_maps, seed=42,
                            model_options={'user_dim': 8, 'timecat_dim': 4, 'heads': 2, 'layers': 1,
                                           'ffn_dim': 32, 'gcn_hidden': [16]})
        result = train(model, split, TrainConfig(epochs=20, batch_size=16, learning_rate=1e-2))
        smoothed = np.convolve(result.losses, np.ones(5) / 5.0, mode='valid')
        self.assertEqual(len(smoothed), 16)
        for epoch, (previous, current) in enumerate(zip(smoothed, smoothed[1:]), 6):
            self.assertLess(current, previous, 'smoothed loss rose at epoch %s' % epoch)
        self.assertGreaterEqual(evaluate(result.model, split.train, [1, 5]).acc_at[1], 0.9)
        self.assertGreaterEqual(evaluate(result.model, split.test, [1, 5]).acc_at[1], 0.8)


class SweepTestCase(SyntheticDataTestCase, SimpleTestCase):

    n_trajectories = 60

    def run_sweep(self, alpha_grid, beta_grid, log_stream=None):
        return sweep(self.processed.split, self.processed.id_maps, alpha_grid, beta_grid,
                     TrainConfig(epochs=1, batch_size=16), SMALL_MODEL, k_list=[1, 5], log_stream=log_stream)

    def test_single_cell_grid_should_give_baseline_and_one_row(self):
        log = io.StringIO()
        result = self.run_sweep([0.5], [0.67], log)
        self.assertEqual(len(result), 2)
        self.assertEqual([(alpha, beta) for alpha, beta, _report in result.rows], [(0.5, 0.67)])
        self.assertIsNone(result.baseline_row.alpha)
        self.assertEqual(result.rows[0][2].alpha, 0.5)

        records = [json.loads(line) for line in log.getvalue().splitlines()]
        self.assertEqual([(record['alpha'], record['beta']) for record in records],
                         [('baseline', 'baseline'), (0.5, 0.67)])

        stream = io.StringIO()
        write_table(result, stream, {'seed': 42})
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[:3], ['# format: poi-core-sweep', '# format_version: 1', '# config: {"seed": 42}'])
        self.assertEqual(lines[3], 'alpha\tbeta\tacc@1\tacc@5\tmrr')
        self.assertTrue(lines[4].startswith('baseline\tbaseline\t'))
        self.assertTrue(lines[5].startswith('0.5\t0.67\t'))
        self.assertEqual(len(lines), 6)

    def test_default_grid_should_be_reproducible(self):
        tables = []
        for _ in range(2):
            stream = io.StringIO()
            write_table(self.run_sweep(None, None), stream)
            tables.append(stream.getvalue())
        rows = [line.split('\t') for line in tables[0].splitlines() if not line.startswith('#')][1:]
        self.assertEqual(len(rows), 10)
        self.assertEqual([row[:2] for row in rows[1:4]], [['0.33', '0.33'], ['0.33', '0.5'], ['0.33', '0.67']])
        self.assertEqual(tables[0], tables[1])

    def test_empty_grid_should_raise_error(self):
        with self.assertRaises(ConfigurationError):
            self.run_sweep([], [0.5])
