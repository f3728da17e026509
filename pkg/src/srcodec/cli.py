"""Command-line surface: encode, decode, metrics, train-transform, sparsify.

Stats go to stdout as machine-parsable key=value pairs; tabular output is
CSV with a header row. Exit codes: 0 ok, 2 usage, 3 I/O, 4 format,
5 target unreachable.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import codec, color, image_io, metrics, pursuit, wavelet
from .dictionary import build_mixed
from .errors import (
    CodecError,
    PpmParseError,
    StreamFormatError,
    TargetUnreachableError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_UNREACHABLE = 5


def _workers() -> int:
    cap = os.environ.get("SRC_THREADS")
    if cap:
        return max(1, int(cap))
    return max(1, os.cpu_count() or 1)


def _load_ppm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        return image_io.read_ppm(fh.read())


def _save_ppm(path: str, img: np.ndarray):
    with open(path, "wb") as fh:
        fh.write(image_io.write_ppm(img))


def _stats(**kv):
    print(" ".join(f"{k}={v}" for k, v in kv.items()))


def _fmt(x) -> str:
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.4f}"
    return str(x)


def _resolve_transform_arg(name: str, img=None):
    if name in ("identity", "dct", "ycbcr"):
        return {
            "identity": color.identity_transform,
            "dct": color.dct_matrix,
            "ycbcr": color.ycbcr_matrix,
        }[name]()
    if name == "pc":
        if img is None:
            raise ValueError("pc transform needs the input image")
        return color.pc_transform(img)
    if os.path.exists(name):
        with open(name, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if "forward" not in payload:
            raise ValueError(f"transform file {name} lacks a 'forward' matrix")
        forward = np.asarray(payload["forward"], dtype=np.float64)
        if forward.shape != (3, 3):
            raise ValueError(f"transform file {name} matrix must be 3x3")
        try:
            inverse = np.linalg.inv(forward)
        except np.linalg.LinAlgError:
            raise ValueError(f"transform file {name} matrix is singular") from None
        return color.ColorTransform(payload.get("kind", "learned"), forward, inverse)
    raise ValueError(f"unknown transform {name!r} (not a kind, not a file)")


def cmd_encode(args) -> int:
    img = _load_ppm(args.input)
    t0 = time.perf_counter()
    transform = _resolve_transform_arg(args.transform, img)
    target_atoms = args.target_atoms
    if args.target_sr is not None:
        elements = img.shape[0] * img.shape[1] * 3
        target_atoms = max(1, int(elements // args.target_sr))
    cfg = codec.EncoderConfig(
        transform=transform,
        levels=args.levels,
        block_side=args.block_side,
        target_psnr=args.target_psnr,
        target_atoms=target_atoms,
        delta=args.delta,
        theta=args.theta,
    )
    result = codec.encode_image(img, cfg)
    with open(args.output, "wb") as fh:
        fh.write(result.data)
    _stats(
        input=args.input,
        output=args.output,
        psnr=_fmt(result.psnr),
        sr=_fmt(result.sr),
        bpp=_fmt(result.bpp),
        atoms=result.atoms,
        delta=_fmt(result.delta),
        seconds=_fmt(time.perf_counter() - t0),
    )
    return EXIT_OK


def cmd_decode(args) -> int:
    with open(args.input, "rb") as fh:
        data = fh.read()
    t0 = time.perf_counter()
    img = codec.decode_image(data)
    _save_ppm(args.output, img)
    _stats(
        input=args.input,
        output=args.output,
        height=img.shape[0],
        width=img.shape[1],
        seconds=_fmt(time.perf_counter() - t0),
    )
    return EXIT_OK


def _image_row(path: str, reference=None):
    img = _load_ppm(path)
    try:
        r1, r2, r3 = metrics.channel_correlation(img)
        corr = (_fmt(r1), _fmt(r2), _fmt(r3))
    except CodecError:
        corr = ("", "", "")
    quality = ""
    if reference is not None:
        quality = _fmt(metrics.psnr(reference, img))
    return [path, quality, "", "", *corr]


def cmd_metrics(args) -> int:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["image", "psnr", "sr", "bpp", "r1", "r2", "r3"])
    if args.corpus:
        paths = sorted(
            os.path.join(args.corpus, name)
            for name in os.listdir(args.corpus)
            if name.lower().endswith(".ppm")
        )
        with ThreadPoolExecutor(max_workers=_workers()) as pool:
            for row in pool.map(_image_row, paths):
                writer.writerow(row)
    else:
        reference = _load_ppm(args.image_a)
        if args.image_b:
            writer.writerow(_image_row(args.image_b, reference=reference))
        else:
            writer.writerow(_image_row(args.image_a))
    sys.stdout.write(out.getvalue())
    return EXIT_OK


def cmd_sparsify(args) -> int:
    img = _load_ppm(args.input)
    t0 = time.perf_counter()
    transform = _resolve_transform_arg(args.transform, img)
    h, w = img.shape[:2]
    elements = h * w * 3
    k = max(1, int(elements // args.sr))
    if args.mode == "truncate":
        u = color.apply_forward(img, transform)
        coeffs = np.stack([wavelet.dwt2(u[:, :, z], args.levels) for z in range(3)], axis=-1)
        coeffs = color.truncate_coefficients(coeffs, k)
        u_hat = np.stack(
            [wavelet.idwt2(coeffs[:, :, z], args.levels) for z in range(3)], axis=-1
        )
        planes = color.apply_inverse(u_hat, transform)
        approx = np.clip(np.rint(planes), 0, 255).astype(np.uint8)
        atoms = k
    else:  # pursuit
        padded = image_io.pad_to_block(img, args.block_side)
        u = color.apply_forward(padded.pixels, transform)
        coeffs = np.stack([wavelet.dwt2(u[:, :, z], args.levels) for z in range(3)], axis=-1)
        extended = pursuit.concat_channels(coeffs)
        blocks = pursuit.partition_blocks(extended, args.block_side)
        dic = build_mixed(args.block_side, args.redundancy)
        decomps = pursuit.hbw_run(blocks, dic, pursuit.StopRule.total_atoms(k))
        rebuilt = pursuit.reconstruct(decomps, dic, extended.shape)
        vol = pursuit.split_channels(rebuilt)
        u_hat = np.stack([wavelet.idwt2(vol[:, :, z], args.levels) for z in range(3)], axis=-1)
        planes = color.apply_inverse(u_hat, transform)
        approx = np.clip(np.rint(planes), 0, 255).astype(np.uint8)[:h, :w]
        atoms = sum(d.count for d in decomps)
    quality = metrics.psnr(img, approx)
    if args.output:
        _save_ppm(args.output, approx)
    _stats(
        input=args.input,
        mode=args.mode,
        transform=args.transform,
        sr=_fmt(float(args.sr)),
        atoms=atoms,
        psnr=_fmt(quality),
        seconds=_fmt(time.perf_counter() - t0),
    )
    return EXIT_OK


def cmd_train_transform(args) -> int:
    paths = sorted(
        os.path.join(args.corpus, name)
        for name in os.listdir(args.corpus)
        if name.lower().endswith(".ppm")
    )
    if not paths:
        print(f"error: no .ppm files in {args.corpus}", file=sys.stderr)
        return EXIT_IO
    train = [_load_ppm(p) for p in paths]
    rng = np.random.default_rng(args.seed)
    t0 = time.perf_counter()
    best = None
    traces = []
    for restart in range(args.restarts):
        init = color.random_orthonormal(rng)
        transform, trace = color.learn_transform(
            train, args.budget, wavelet_levels=args.levels, max_iter=args.iters, init=init
        )
        traces.append(trace)
        if best is None or trace[-1] < best[1]:
            best = (transform, trace[-1], restart)
    transform, objective, which = best
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(
            {"kind": "learned", "forward": transform.forward.tolist()}, fh, indent=2
        )
        fh.write("\n")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["restart", "iteration", "objective"])
            for restart, trace in enumerate(traces):
                for it, value in enumerate(trace):
                    writer.writerow([restart, it, f"{value:.6f}"])
    _stats(
        corpus=args.corpus,
        images=len(train),
        restarts=args.restarts,
        best_restart=which,
        objective=_fmt(objective),
        output=args.output,
        seconds=_fmt(time.perf_counter() - t0),
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srcodec",
        description="Sparse-representation RGB image codec and analysis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="compress a PPM image")
    enc.add_argument("input")
    enc.add_argument("output")
    enc.add_argument("--transform", default="dct",
                     help="identity|dct|ycbcr|pc or a learned-transform JSON file")
    target = enc.add_mutually_exclusive_group(required=True)
    target.add_argument("--target-psnr", type=float)
    target.add_argument("--target-atoms", type=int)
    target.add_argument("--target-sr", type=float)
    enc.add_argument("--delta", type=float)
    enc.add_argument("--theta", type=float)
    enc.add_argument("--levels", type=int, default=4)
    enc.add_argument("--block-side", type=int, default=16)
    enc.add_argument("--seed", type=int, default=0)
    enc.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="decompress to a PPM image")
    dec.add_argument("input")
    dec.add_argument("output")
    dec.set_defaults(func=cmd_decode)

    met = sub.add_parser("metrics", help="PSNR / channel-correlation report as CSV")
    met.add_argument("image_a", nargs="?")
    met.add_argument("image_b", nargs="?")
    met.add_argument("--corpus", help="directory of .ppm files; one CSV row each")
    met.set_defaults(func=cmd_metrics)

    spr = sub.add_parser("sparsify", help="fixed-sparsity approximation study")
    spr.add_argument("input")
    spr.add_argument("--transform", default="dct")
    spr.add_argument("--sr", type=float, required=True)
    spr.add_argument("--mode", choices=("truncate", "pursuit"), default="truncate")
    spr.add_argument("--levels", type=int, default=4)
    spr.add_argument("--block-side", type=int, default=16)
    spr.add_argument("--redundancy", type=int, default=2)
    spr.add_argument("--output", help="optionally write the approximation as PPM")
    spr.set_defaults(func=cmd_sparsify)

    trn = sub.add_parser("train-transform", help="learn a cross-color transform")
    trn.add_argument("corpus")
    trn.add_argument("output", help="JSON file for the learned transform")
    trn.add_argument("--budget", type=int, required=True,
                     help="coefficients kept per image during learning")
    trn.add_argument("--iters", type=int, default=50)
    trn.add_argument("--restarts", type=int, default=1)
    trn.add_argument("--seed", type=int, default=0)
    trn.add_argument("--levels", type=int, default=4)
    trn.add_argument("--trace", help="CSV file for the objective trace")
    trn.set_defaults(func=cmd_train_transform)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "metrics" and not (args.corpus or args.image_a):
        parser.error("metrics needs two images or --corpus")
    try:
        return args.func(args)
    except TargetUnreachableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (PpmParseError, StreamFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, CodecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
