from django.conf import settings

# Raw check-in file layout (dotted path to a layout class)
INGEST_LAYOUT = getattr(settings, 'POI_INGEST_LAYOUT', 'poi_core.ingest.formats.TSMCLayout')
# Run aborts when more than this share of lines is malformed (default: 1 %)
INGEST_MAX_MALFORMED_RATIO = getattr(settings, 'POI_INGEST_MAX_MALFORMED_RATIO', 0.01)
MIN_USER_CHECKINS = getattr(settings, 'POI_MIN_USER_CHECKINS', 10)
MIN_POI_CHECKINS = getattr(settings, 'POI_MIN_POI_CHECKINS', 10)
# Trajectory window, in hours (default: one day)
TRAJECTORY_WINDOW_HOURS = getattr(settings, 'POI_TRAJECTORY_WINDOW_HOURS', 24)
TRAIN_FRACTION = getattr(settings, 'POI_TRAIN_FRACTION', 0.8)
VALIDATION_FRACTION = getattr(settings, 'POI_VALIDATION_FRACTION', 0.1)
TEST_FRACTION = getattr(settings, 'POI_TEST_FRACTION', 0.1)
# "trajectory" drops whole trajectories with unseen users/POIs, "checkin" only the unseen check-ins
SPLIT_EXCLUSION = getattr(settings, 'POI_SPLIT_EXCLUSION', 'trajectory')
# Latitude/longitude difference tolerated between two records of one POI, in degrees
POI_META_TOLERANCE = getattr(settings, 'POI_META_TOLERANCE', 1e-4)

POPULARITY_ALPHA = getattr(settings, 'POI_POPULARITY_ALPHA', 0.5)
POPULARITY_BETA = getattr(settings, 'POI_POPULARITY_BETA', 0.5)
# Check-ins younger than this are "recent" (default: three months)
RECENCY_WINDOW_DAYS = getattr(settings, 'POI_RECENCY_WINDOW_DAYS', 90)
POPULARITY_WITH_FREQUENCY = getattr(settings, 'POI_POPULARITY_WITH_FREQUENCY', False)
SELF_LOOP_WEIGHT = getattr(settings, 'POI_SELF_LOOP_WEIGHT', 1.0)

USER_DIM = getattr(settings, 'POI_USER_DIM', 16)
TIMECAT_DIM = getattr(settings, 'POI_TIMECAT_DIM', 8)
HEADS = getattr(settings, 'POI_HEADS', 2)
LAYERS = getattr(settings, 'POI_LAYERS', 2)
FFN_DIM = getattr(settings, 'POI_FFN_DIM', 64)
GCN_HIDDEN = getattr(settings, 'POI_GCN_HIDDEN', [32])
MAX_SEQ_LEN = getattr(settings, 'POI_MAX_SEQ_LEN', 32)
ACTIVATION_SLOPE = getattr(settings, 'POI_ACTIVATION_SLOPE', 0.2)
DROPOUT = getattr(settings, 'POI_DROPOUT', 0.0)
UNSCALED_ATTENTION = getattr(settings, 'POI_UNSCALED_ATTENTION', False)
# "time_of_day" or "interval"
TIME_TARGET = getattr(settings, 'POI_TIME_TARGET', 'time_of_day')
TIME_LOSS_FACTOR = getattr(settings, 'POI_TIME_LOSS_FACTOR', 10.0)

EPOCHS = getattr(settings, 'POI_EPOCHS', 20)
BATCH_SIZE = getattr(settings, 'POI_BATCH_SIZE', 16)
LEARNING_RATE = getattr(settings, 'POI_LEARNING_RATE', 1e-3)
OPTIMIZER = getattr(settings, 'POI_OPTIMIZER', 'poi_core.nn.optim.Adam')
SEED = getattr(settings, 'POI_SEED', 42)
# "position" evaluates every supervised position, "trajectory_last" only the final transition
EVAL_UNIT = getattr(settings, 'POI_EVAL_UNIT', 'position')
K_LIST = getattr(settings, 'POI_K_LIST', [1, 5, 10, 20])
ALPHA_GRID = getattr(settings, 'POI_ALPHA_GRID', [0.33, 0.50, 0.67])
BETA_GRID = getattr(settings, 'POI_BETA_GRID', [0.33, 0.50, 0.67])

DATASET_PATH = getattr(settings, 'POI_DATASET_PATH', '')
OUTPUT_DIR = getattr(settings, 'POI_OUTPUT_DIR', 'poi_output')

BUNDLE_FILE_NAME = getattr(settings, 'POI_BUNDLE_FILE_NAME', 'dataset.json')
CHECKPOINT_FILE_NAME = getattr(settings, 'POI_CHECKPOINT_FILE_NAME', 'checkpoint.json')
TRAIN_LOG_FILE_NAME = getattr(settings, 'POI_TRAIN_LOG_FILE_NAME', 'train_log.jsonl')
METRICS_FILE_NAME = getattr(settings, 'POI_METRICS_FILE_NAME', 'metrics.json')
POPULARITY_FILE_NAME = getattr(settings, 'POI_POPULARITY_FILE_NAME', 'popularity.tsv')
EDGES_FILE_NAME = getattr(settings, 'POI_EDGES_FILE_NAME', 'flowmap_edges.tsv')
SWEEP_FILE_NAME = getattr(settings, 'POI_SWEEP_FILE_NAME', 'sweep.tsv')
SWEEP_LOG_FILE_NAME = getattr(settings, 'POI_SWEEP_LOG_FILE_NAME', 'sweep_log.jsonl')
