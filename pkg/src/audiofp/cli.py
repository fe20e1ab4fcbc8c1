"""Command-line frontend: scan, build, recommend, evaluate, inspect."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import store
from .errors import AudioFpError, DomainError, EmptyCorpus, TagsMissing
from .fingerprint import (Fingerprint, ReducedFingerprint, assemble_fingerprint,
                          fit_fingerprint_model, project, row_means)
from .pipeline import PipelineConfig, compute_features, fingerprint_wav_bytes, prepare_clip
from .recommend import distance_matrix, evaluate_genre_accuracy, top_k
from .wav import decode_wav

FEATURES = ("spec", "mfcc", "chroma", "onset", "beats", "fingerprint")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    d = PipelineConfig()
    parser.add_argument("--sample-rate", type=int, default=d.sample_rate)
    parser.add_argument("--frame-size", type=int, default=d.frame_size)
    parser.add_argument("--hop", type=int, default=d.hop)
    parser.add_argument("--window", default=d.window,
                        choices=("hann", "rectangular"))
    parser.add_argument("--n-mels", type=int, default=d.n_mels)
    parser.add_argument("--n-mfcc", type=int, default=d.n_mfcc)
    parser.add_argument("--segment-start", type=float, default=d.segment_start_s)
    parser.add_argument("--segment-dur", type=float, default=d.segment_dur_s)
    parser.add_argument("--alpha", type=float, default=d.alpha)
    parser.add_argument("--bpm-min", type=float, default=d.bpm_min)
    parser.add_argument("--bpm-max", type=float, default=d.bpm_max)


def _config_from_args(args, variance_target=None, k=None) -> PipelineConfig:
    return PipelineConfig(
        sample_rate=args.sample_rate, frame_size=args.frame_size,
        hop=args.hop, window=args.window, n_mels=args.n_mels,
        n_mfcc=args.n_mfcc, segment_start_s=args.segment_start,
        segment_dur_s=args.segment_dur, alpha=args.alpha,
        bpm_min=args.bpm_min, bpm_max=args.bpm_max,
        variance_target=variance_target if variance_target is not None
        else PipelineConfig.variance_target,
        k=k if k is not None else PipelineConfig.k,
    )


def cmd_scan(args) -> int:
    cfg = _config_from_args(args)
    input_dir = Path(args.input)

    if args.tags:
        tags = store.load_tags(args.tags)
        jobs = [(t.track_id,
                 Path(t.path) if Path(t.path).is_absolute()
                 else input_dir / t.path,
                 sorted(t.genres)) for t in tags]
    else:
        jobs = [(p.stem, p, []) for p in sorted(input_dir.glob("*.wav"))]

    def run_one(job):
        track_id, path, genres = job
        data = path.read_bytes()
        fp = fingerprint_wav_bytes(track_id, data, cfg)
        return store.IndexRecord(track_id, str(path), genres, fp.values)

    records, failures = [], []
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        for job, result in zip(jobs, pool.map(
                lambda j: _attempt(run_one, j), jobs)):
            if isinstance(result, Exception):
                failures.append((job[0], result))
                print(f"scan: {job[0]}: {result}", file=sys.stderr)
            else:
                records.append(result)

    if not records:
        raise EmptyCorpus(f"no decodable tracks in {input_dir}")
    records.sort(key=lambda r: r.track_id)
    store.write_index(records, args.out)
    print(f"indexed {len(records)} tracks -> {args.out}")
    return 1 if failures else 0


def _attempt(fn, arg):
    try:
        return fn(arg)
    except (AudioFpError, OSError) as exc:
        return exc


def cmd_build(args) -> int:
    records = store.read_index(args.index)
    corpus = np.stack([r.fingerprint for r in records])
    model = fit_fingerprint_model(corpus, args.variance)

    reduced = {}
    genres = {}
    for r in records:
        reduced[r.track_id] = project(model, Fingerprint(r.track_id,
                                                         r.fingerprint)).values
        genres[r.track_id] = r.genres

    cfg = PipelineConfig(variance_target=args.variance)
    mf = store.ModelFile(model=model, reduced=reduced, genres=genres,
                         config=cfg.to_dict())
    store.write_model(mf, args.out)

    cumulative = np.cumsum(model.full_variance_ratios)
    print(f"n_components={model.n_components} "
          f"(cumulative variance {cumulative[model.n_components - 1]:.4f} "
          f"at target {args.variance})")
    print("component,ratio,cumulative")
    for i, (r, c) in enumerate(zip(model.full_variance_ratios, cumulative), 1):
        print(f"{i},{r:.6f},{c:.6f}")
    if args.variance_curve:
        with open(args.variance_curve, "w", encoding="utf-8") as fh:
            fh.write("component,ratio,cumulative\n")
            for i, (r, c) in enumerate(
                    zip(model.full_variance_ratios, cumulative), 1):
                fh.write(f"{i},{float(r)!r},{float(c)!r}\n")
    return 0


def cmd_recommend(args) -> int:
    mf = store.read_model(args.model)
    reduced = [ReducedFingerprint(tid, vec)
               for tid, vec in sorted(mf.reduced.items())]
    dist = distance_matrix(reduced)
    k = args.k if args.k is not None else int(mf.config.get("k", 3))
    recs = top_k(dist, args.track, k)
    for rank, (tid, d) in enumerate(recs.neighbors, 1):
        genre_str = "|".join(mf.genres.get(tid, []))
        print(f"{rank},{tid},{float(d)!r},{genre_str}")
    return 0


def cmd_evaluate(args) -> int:
    mf = store.read_model(args.model)
    reduced = [ReducedFingerprint(tid, vec)
               for tid, vec in sorted(mf.reduced.items())]
    dist = distance_matrix(reduced)
    tags = {tid: {g.strip().lower() for g in gs if g.strip()}
            for tid, gs in mf.genres.items()}
    empty = sorted(tid for tid, gs in tags.items() if not gs)
    if empty:
        raise TagsMissing(f"no genre tags for: {', '.join(empty)}")
    k = args.k if args.k is not None else int(mf.config.get("k", 3))
    accuracy, report = evaluate_genre_accuracy(dist, tags, k)
    print("track_id,success")
    for tid, ok in report:
        print(f"{tid},{'yes' if ok else 'no'}")
    print(f"accuracy {accuracy:.4f} ({accuracy * 100:.1f}%)")
    return 0


def cmd_inspect(args) -> int:
    cfg = _config_from_args(args)
    clip = prepare_clip(decode_wav(Path(args.track).read_bytes()), cfg)
    feats = compute_features(clip, cfg)
    name = args.feature
    if name == "fingerprint":
        fp = assemble_fingerprint(
            Path(args.track).stem,
            row_means(feats["spectrogram"]), row_means(feats["mfcc"]),
            row_means(feats["chroma"]), feats["tempo_block"])
        matrix = fp.values[None, :]
    elif name == "spec":
        matrix = feats["spectrogram"]
    elif name == "mfcc":
        matrix = feats["mfcc"]
    elif name == "chroma":
        matrix = feats["chroma"]
    elif name == "onset":
        env = feats["onset"]
        matrix = (env.values if env is not None else np.zeros(0))[:, None]
    elif name == "beats":
        beats = feats["beats"]
        if beats is None:
            matrix = np.zeros((0, 2))
        else:
            matrix = np.column_stack([beats.beat_frames, beats.beat_times])
    else:
        raise DomainError(f"unknown feature {name!r}")
    np.savetxt(args.out, matrix, delimiter=",")
    print(f"wrote {matrix.shape[0]} rows x "
          f"{matrix.shape[1] if matrix.ndim > 1 else 1} cols -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="audiofp",
        description="Audio fingerprinting and content-based music "
                    "recommendation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="fingerprint a directory of WAV files")
    p.add_argument("--input", required=True)
    p.add_argument("--tags", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_config_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("build", help="fit the PCA model over an index")
    p.add_argument("--index", required=True)
    p.add_argument("--variance", type=float, default=0.95)
    p.add_argument("--out", required=True)
    p.add_argument("--variance-curve", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("recommend", help="top-K similar tracks")
    p.add_argument("--model", required=True)
    p.add_argument("--track", required=True)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("evaluate", help="genre-match accuracy over the corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", help="dump an intermediate feature as CSV")
    p.add_argument("--track", required=True)
    p.add_argument("--feature", required=True, choices=FEATURES)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AudioFpError as exc:
        print(f"audiofp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
