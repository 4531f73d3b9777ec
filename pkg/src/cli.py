"""lanestyle command-line entry point."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .clustering.ahc import ahc_fit
from .clustering.morphology import morph_cluster
from .clustering.summary import render_cluster_report
from .datagen.generator import generate_features
from .datagen.profiles import DEFAULT_PROFILES, load_profiles, with_noise_clump
from .datagen.simulator import generate_scenarios
from .evaluation.benchmark import benchmark, compare
from .evaluation.report import render_cluster_comparison, render_eval_csv, render_eval_table
from .features.extraction import NoLaneChangeError, extract_decision_point
from .features.io import (
    read_dataset_csv,
    read_trajectory_csv,
    render_dataset_csv,
    render_trajectory_csv,
)
from .features.types import STYLES, Dataset, StyleLabel
from .recognizers.kmc_knn import KmcKnnModel, kmcknn_recognize_batch, kmcknn_train
from .recognizers.knn import knn_classify_batch, knn_fit
from .recognizers.model_file import read_model, render_model
from .utils.config import RunConfig, load_config
from .utils.files import write_all_atomic
from .utils.validators import DataError, NumericError, ValidationError

logger = logging.getLogger("lanestyle")

# flag destination -> (config section, key); None section means top level
FLAG_KEYS = {
    "seed": (None, "seed"),
    "threshold": ("features", "decision_threshold"),
    "q": ("morphology", "q"),
    "r": ("morphology", "r"),
    "noise_fraction": ("morphology", "noise_fraction"),
    "connectivity": ("morphology", "connectivity"),
    "max_iter": ("kmeans", "max_iter"),
    "method": ("recognizer", "method"),
    "k": ("recognizer", "k"),
    "K": ("recognizer", "K"),
    "vote": ("recognizer", "vote"),
    "p": ("crossval", "p"),
    "repeats": ("crossval", "repeats"),
    "k_values": ("crossval", "k_values"),
    "target": ("ahc", "target_clusters"),
    "linkage": ("ahc", "linkage"),
    "n": ("datagen", "n"),
    "mode": ("datagen", "mode"),
    "profiles": ("datagen", "profiles"),
    "noise_clump": ("datagen", "noise_clump"),
}


class ArgumentParser(argparse.ArgumentParser):
    """Parser that raises instead of exiting, so usage errors share the exit-code path."""

    def error(self, message: str):
        raise ValidationError(f"{self.prog}: {message}")


def _triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) == 1:
        parts = parts * 3
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N,N,N, got {text!r}")
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"expected 1 or 3 levels, got {len(values)}")
    return values


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file; its values override flags")
    common.add_argument("--seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    parser = ArgumentParser(prog="lanestyle", description="Lane-change decision style toolkit")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def add_command(name: str, help_text: str) -> ArgumentParser:
        return subparsers.add_parser(name, help=help_text, parents=[common])

    def data_arg(p):
        p.add_argument("--data", required=True, help="Feature CSV (dd,dv,da[,label])")

    def morphology_args(p):
        p.add_argument("--q", type=_triple, help="Quantization levels, N or N,N,N")
        p.add_argument("--r", type=int, help="Kernel radius in cells")
        p.add_argument("--noise-fraction", type=float)
        p.add_argument("--connectivity", type=int, choices=(6, 18, 26))

    def ahc_args(p):
        p.add_argument("--target", type=int, help="Clusters left after merging")
        p.add_argument("--linkage", choices=("ward", "single", "complete", "average"))

    def recognizer_args(p, method=True):
        if method:
            p.add_argument("--method", choices=("knn", "kmcknn"))
        p.add_argument("--k", type=int, help="Sub-clusters per style")
        p.add_argument("--K", type=int, help="Neighbors; default floor(sqrt(N_train))")
        p.add_argument("--vote", choices=("weighted", "count", "literal"))
        p.add_argument("--max-iter", type=int)

    p = add_command("generate", "Generate a synthetic labeled dataset")
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=("features", "scenario"))
    p.add_argument("--profiles", help="Style profile YAML file")
    p.add_argument("--noise-clump", action="store_true", default=None)
    p.add_argument("--trajectories", help="Directory for trajectory CSVs (scenario mode)")
    p.add_argument("--out", required=True)

    p = add_command("extract", "Extract decision points from trajectory CSVs")
    p.add_argument("trajectories", nargs="+")
    p.add_argument("--label", help="Style label given to every extracted sample")
    p.add_argument("--threshold", type=float, help="Lateral velocity threshold, m/s")
    p.add_argument("--out", required=True)

    p = add_command("cluster", "Morphology-based clustering")
    data_arg(p)
    morphology_args(p)
    p.add_argument("--out", required=True, help="Cluster report CSV")
    p.add_argument("--labels-out", required=True, help="Labeled dataset CSV")

    p = add_command("ahc", "Agglomerative hierarchical clustering")
    data_arg(p)
    ahc_args(p)
    p.add_argument("--out", required=True, help="Cluster report CSV")
    p.add_argument("--labels-out", help="Per-sample cluster CSV")

    p = add_command("train", "Train a recognizer and write a model file")
    data_arg(p)
    recognizer_args(p)
    p.add_argument("--out", required=True)

    p = add_command("recognize", "Label query samples with a trained model")
    p.add_argument("--model", required=True)
    data_arg(p)
    p.add_argument("--vote", choices=("weighted", "count", "literal"))
    p.add_argument("--out", required=True)

    for name, help_text in (
        ("crossval", "p-fold cross-validated accuracy"),
        ("bench", "Cross-validated accuracy and timing against plain KNN"),
    ):
        p = add_command(name, help_text)
        data_arg(p)
        recognizer_args(p)
        p.add_argument("--p", type=int, help="Fold count")
        if name == "bench":
            p.add_argument("--repeats", type=int)
            p.add_argument("--k-values", type=int, nargs="+", help="Several k to compare")
        p.add_argument("--out", required=True, help="Per-fold CSV")
        p.add_argument("--table", help="Text table output")

    p = add_command("report", "Morphology vs AHC and KNN vs kMC-KNN tables")
    data_arg(p)
    morphology_args(p)
    ahc_args(p)
    recognizer_args(p, method=False)
    p.add_argument("--p", type=int, help="Fold count")
    p.add_argument("--repeats", type=int)
    p.add_argument("--out", required=True)
    return parser


def config_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Nested config mapping of the flags that were given."""
    overrides: dict[str, Any] = {}
    for dest, (section, key) in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        if section is None:
            overrides[key] = value
        else:
            overrides.setdefault(section, {})[key] = value
    return overrides


def _labeled(path: str) -> Dataset:
    data = read_dataset_csv(path)
    if data.labels is None:
        raise DataError(f"{path}: a label column is required")
    clean = data.without_noise()
    if len(clean) < len(data):
        logger.info(f"Dropped {len(data) - len(clean)} noise samples from {path}")
    if len(clean) == 0:
        raise DataError(f"{path}: no non-noise samples")
    return clean


def cmd_generate(args, config: RunConfig) -> dict[Path, str]:
    settings = config.datagen
    profiles = load_profiles(settings.profiles) if settings.profiles else list(DEFAULT_PROFILES)
    if settings.noise_clump:
        profiles = with_noise_clump(profiles)
    outputs = {}
    if settings.mode == "scenario":
        data, trajectories = generate_scenarios(profiles, settings.n, config.seed)
        if args.trajectories:
            for i, trajectory in enumerate(trajectories):
                path = Path(args.trajectories) / f"trajectory_{i:05d}.csv"
                outputs[path] = render_trajectory_csv(trajectory.frames)
    else:
        if args.trajectories:
            raise ValidationError("--trajectories requires --mode scenario")
        data = generate_features(profiles, settings.n, config.seed)
    outputs[Path(args.out)] = render_dataset_csv(data)
    return outputs


def cmd_extract(args, config: RunConfig) -> dict[Path, str]:
    label = StyleLabel.parse(args.label) if args.label else None
    vectors = []
    for path in args.trajectories:
        frames = read_trajectory_csv(path)
        try:
            vectors.append(extract_decision_point(frames, config.features.decision_threshold))
        except NoLaneChangeError as e:
            raise NoLaneChangeError(f"{path}: {e}")
        except ValidationError as e:
            raise DataError(f"{path}: {e}")
    labels = None if label is None else [label] * len(vectors)
    data = Dataset.from_vectors(vectors, labels)
    return {Path(args.out): render_dataset_csv(data)}


def cmd_cluster(args, config: RunConfig) -> dict[Path, str]:
    settings = config.morphology
    data = read_dataset_csv(args.data)
    result = morph_cluster(
        data, settings.q, settings.r, settings.noise_fraction, settings.connectivity
    )
    names = result.style_names
    logger.info(
        f"Found {result.J} clusters and {len(result.noise_indices)} noise samples in {args.data}"
    )
    report = render_cluster_report(
        result.centers,
        result.ranges,
        result.counts,
        None if names is None else [name.value for name in names],
    )
    return {
        Path(args.out): report,
        Path(args.labels_out): render_dataset_csv(data, result.label_names()),
    }


def cmd_ahc(args, config: RunConfig) -> dict[Path, str]:
    data = read_dataset_csv(args.data)
    result = ahc_fit(data, config.ahc.target_clusters, config.ahc.linkage)
    names = result.style_names
    outputs = {
        Path(args.out): render_cluster_report(
            result.centers,
            result.ranges,
            result.counts,
            None if names is None else [name.value for name in names],
        )
    }
    if args.labels_out:
        labels = [str(j) if names is None else names[j].value for j in result.labels]
        outputs[Path(args.labels_out)] = render_dataset_csv(data, labels)
    return outputs


def cmd_train(args, config: RunConfig) -> dict[Path, str]:
    settings = config.recognizer
    data = _labeled(args.data)
    if settings.method == "knn":
        model = knn_fit(data, settings.K)
    else:
        model = kmcknn_train(
            data, settings.k, seed=config.seed, K=settings.K, max_iter=config.kmeans.max_iter
        )
    logger.info(f"Trained {settings.method} on {len(data)} samples (K={model.K})")
    return {Path(args.out): render_model(model, settings.vote)}


def cmd_recognize(args, config: RunConfig) -> dict[Path, str]:
    model, vote = read_model(args.model)
    vote = args.vote or vote
    data = read_dataset_csv(args.data)
    if isinstance(model, KmcKnnModel):
        result = kmcknn_recognize_batch(model, data.features, vote)
    else:
        result = knn_classify_batch(model, data.features, vote)
    logger.info(
        f"Recognized {len(data)} samples with {result.distance_evals} distance evaluations"
    )
    if data.labels is not None:
        known = data.labels < len(STYLES)
        correct = int((result.labels[known] == data.labels[known]).sum())
        logger.info(f"{correct} of {int(known.sum())} labeled samples match")
    query = Dataset(data.features)
    labels = [style.value for style in result.style_labels]
    return {Path(args.out): render_dataset_csv(query, labels)}


def _k_values(config: RunConfig) -> list[int]:
    return config.crossval.k_values or [config.recognizer.k]


def _benchmark(data: Dataset, config: RunConfig, method: str, k: int, repeats: int):
    return benchmark(
        method,
        data,
        p=config.crossval.p,
        k=k,
        seed=config.seed,
        repeats=repeats,
        K=config.recognizer.K,
        vote=config.recognizer.vote,
    )


def _evaluate(data: Dataset, config: RunConfig, repeats: int, with_baseline: bool):
    """Reports of the configured method, and a plain KNN baseline on the same folds."""
    if config.recognizer.method == "knn":
        baseline = _benchmark(data, config, "knn", 1, repeats)
        return [baseline], baseline
    reports = [_benchmark(data, config, "kmcknn", k, repeats) for k in _k_values(config)]
    baseline = _benchmark(data, config, "knn", 1, repeats) if with_baseline else None
    return reports, baseline


def cmd_crossval(args, config: RunConfig) -> dict[Path, str]:
    reports, _ = _evaluate(_labeled(args.data), config, repeats=1, with_baseline=False)
    table = render_eval_table(reports)
    print(table, end="")
    outputs = {Path(args.out): render_eval_csv(reports)}
    if args.table:
        outputs[Path(args.table)] = table
    return outputs


def cmd_bench(args, config: RunConfig) -> dict[Path, str]:
    reports, baseline = _evaluate(
        _labeled(args.data), config, config.crossval.repeats, with_baseline=True
    )
    rows = reports if reports[0] is baseline else [baseline] + reports
    for report in rows[1:]:
        comparison = compare(report, baseline)
        logger.info(
            f"kmcknn k={report.k}: speedup {comparison.speedup:.2f}x, "
            f"distance evaluations -{comparison.eval_reduction * 100:.1f}%"
        )
    table = render_eval_table(rows, baseline)
    print(table, end="")
    outputs = {Path(args.out): render_eval_csv(rows)}
    if args.table:
        outputs[Path(args.table)] = table
    return outputs


def cmd_report(args, config: RunConfig) -> dict[Path, str]:
    data = read_dataset_csv(args.data)
    settings = config.morphology
    morph = morph_cluster(
        data, settings.q, settings.r, settings.noise_fraction, settings.connectivity
    )
    ahc = ahc_fit(data, config.ahc.target_clusters, config.ahc.linkage)
    clusters = render_cluster_comparison(morph, ahc, data.features.std(axis=0))

    # unlabeled data is labeled by its own morphology clusters
    labeled = data if data.labels is not None else morph.styled_dataset(data)
    labeled = labeled.without_noise()
    repeats = config.crossval.repeats
    baseline = _benchmark(labeled, config, "knn", 1, repeats)
    reports = [baseline] + [
        _benchmark(labeled, config, "kmcknn", k, repeats) for k in _k_values(config)
    ]
    text = (
        f"Morphology (q={settings.q}, r={settings.r}) vs AHC "
        f"({config.ahc.linkage}, {config.ahc.target_clusters} clusters)\n"
        + clusters
        + "\nKNN vs kMC-KNN\n"
        + render_eval_table(reports, baseline)
    )
    print(text, end="")
    return {Path(args.out): text}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one command and write its outputs; returns the exit status."""
    command = "lanestyle"
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        config = load_config(args.config, config_overrides(args))
        level = logging.DEBUG if args.verbose else getattr(logging, config.logging.level)
        logging.basicConfig(level=level)
        logging.getLogger().setLevel(level)

        if command == "generate":
            outputs = cmd_generate(args, config)
        elif command == "extract":
            outputs = cmd_extract(args, config)
        elif command == "cluster":
            outputs = cmd_cluster(args, config)
        elif command == "ahc":
            outputs = cmd_ahc(args, config)
        elif command == "train":
            outputs = cmd_train(args, config)
        elif command == "recognize":
            outputs = cmd_recognize(args, config)
        elif command == "crossval":
            outputs = cmd_crossval(args, config)
        elif command == "bench":
            outputs = cmd_bench(args, config)
        elif command == "report":
            outputs = cmd_report(args, config)
        else:
            raise ValidationError(f"Unknown command: {command}")

        for path in write_all_atomic(outputs):
            logger.info(f"Wrote {path}")
        return 0

    except ValidationError as e:
        logger.error(f"Error executing {command}: {e}")
        return 1
    except (DataError, OSError) as e:
        logger.error(f"Error executing {command}: {e}")
        return 2
    except NumericError as e:
        logger.error(f"Error executing {command}: {e}")
        return 3


def main() -> None:
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
