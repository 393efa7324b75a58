"""Command-line front end: `cdelta compute` and `cdelta batch`.

Outputs are byte-deterministic for identical inputs, flags, and seed.
JSON reports serialize floats with Python's shortest round-trip repr (up
to 17 significant digits); text reports display 4 significant digits.

Exit codes: 0 success, 1 failure, 2 undefined divergence (a constant
group).  Failures print a machine-readable JSON object on stderr:
``{"error": kind, "message": ..., "context": {...}}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .core import CdeltaConfig, Normalization, PairedSample, Variant, cdelta, rescaled_cdelta
from .errors import CdeltaError, ManifestError, UndefinedDivergence
from .ingest import MissingPolicy, ingest_csv
from .nulldist import permutation_null, summarize_null
from .refstats import pearson, spearman

__all__ = [
    "REPORT_SCHEMA",
    "BatchManifest",
    "PairSpec",
    "compute_report",
    "render_text",
    "load_manifest",
    "run_batch_report",
    "main",
    "entrypoint",
]

_NUMBER = {"type": "number"}

# Published schema for the compute report.  The "null" block is present
# only when permutation benchmarking was requested; the rescaling block
# is present unless it was disabled.
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": [
        "n",
        "variant",
        "normalization",
        "cdelta",
        "numerator",
        "denominator",
        "pearson",
        "spearman",
        "version",
    ],
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "variant": {"enum": ["squared", "absolute"]},
        "normalization": {"enum": ["formula", "raw"]},
        "cdelta": _NUMBER,
        "numerator": _NUMBER,
        "denominator": _NUMBER,
        "self_x": _NUMBER,
        "self_y": _NUMBER,
        "cdelta_max": _NUMBER,
        "rescaled": _NUMBER,
        "pearson": _NUMBER,
        "spearman": _NUMBER,
        "null": {
            "type": "object",
            "additionalProperties": False,
            "required": [
                "k",
                "seed",
                "rng",
                "percentile",
                "pseudo_p",
                "mean",
                "sd",
                "quantiles",
            ],
            "properties": {
                "k": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
                "rng": {"type": "string"},
                "percentile": _NUMBER,
                "pseudo_p": _NUMBER,
                "mean": _NUMBER,
                "sd": _NUMBER,
                "quantiles": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["q01", "q05", "q50", "q95", "q99"],
                    "properties": {
                        "q01": _NUMBER,
                        "q05": _NUMBER,
                        "q50": _NUMBER,
                        "q95": _NUMBER,
                        "q99": _NUMBER,
                    },
                },
            },
        },
        "version": {"type": "string"},
    },
}


def _fmt(value: float) -> str:
    """4 significant digits for text output."""
    return format(value, ".4g")


def compute_report(
    sample: PairedSample,
    config: CdeltaConfig,
    rescale: bool = True,
    permutations: int = 0,
    seed: int = 0,
) -> dict:
    """Build the report document for one paired sample."""
    observed = cdelta(sample, config)
    doc: dict = {
        "n": sample.n,
        "variant": config.variant.value,
        "normalization": config.normalization.value,
        "cdelta": observed.value,
        "numerator": observed.numerator,
        "denominator": observed.denominator,
    }
    if rescale:
        report = rescaled_cdelta(sample, config)
        doc["self_x"] = report.self_x.value
        doc["self_y"] = report.self_y.value
        doc["cdelta_max"] = report.cdelta_max
        doc["rescaled"] = report.rescaled
    doc["pearson"] = pearson(sample).r
    doc["spearman"] = spearman(sample).r
    if permutations > 0:
        null = permutation_null(sample, config, k=permutations, seed=seed)
        summary = summarize_null(null, observed.value)
        doc["null"] = {
            "k": null.k,
            "seed": null.seed,
            "rng": null.rng,
            "percentile": summary.percentile,
            "pseudo_p": summary.pseudo_p,
            "mean": summary.mean,
            "sd": summary.sd,
            "quantiles": summary.quantiles,
        }
    doc["version"] = __version__
    return doc


def render_text(doc: dict) -> str:
    """Human-readable report; same numbers as the JSON document."""
    lines = [
        f"cdelta report (version {doc['version']})",
        f"n: {doc['n']}   variant: {doc['variant']}   "
        f"normalization: {doc['normalization']}",
        f"cdelta:     {_fmt(doc['cdelta'])}   "
        f"(numerator {_fmt(doc['numerator'])}, denominator {_fmt(doc['denominator'])})",
    ]
    if "rescaled" in doc:
        lines += [
            f"self_x:     {_fmt(doc['self_x'])}",
            f"self_y:     {_fmt(doc['self_y'])}",
            f"cdelta_max: {_fmt(doc['cdelta_max'])}",
            f"rescaled:   {_fmt(doc['rescaled'])}",
        ]
    lines += [
        f"pearson:    {_fmt(doc['pearson'])}",
        f"spearman:   {_fmt(doc['spearman'])}",
    ]
    if "null" in doc:
        null = doc["null"]
        q = null["quantiles"]
        lines += [
            f"null benchmark: k={null['k']} seed={null['seed']} ({null['rng']})",
            f"  percentile: {_fmt(null['percentile'])}   "
            f"pseudo_p: {_fmt(null['pseudo_p'])}",
            f"  mean: {_fmt(null['mean'])}   sd: {_fmt(null['sd'])}",
            "  quantiles: "
            + "  ".join(f"{name}={_fmt(q[name])}" for name in ("q01", "q05", "q50", "q95", "q99")),
        ]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# batch mode
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PairSpec:
    """One labeled dataset pair inside a batch manifest."""

    label: str
    file: str
    x: str
    y: str


@dataclass(frozen=True)
class BatchManifest:
    """Labeled pair specifications sharing one configuration."""

    pairs: tuple[PairSpec, ...]


def load_manifest(path: str | Path) -> BatchManifest:
    """Load and validate a JSON batch manifest.

    Expected shape: ``{"pairs": [{"label", "file", "x", "y"}, ...]}``.
    File paths are resolved relative to the manifest's directory.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ManifestError(f"manifest is not valid JSON: {err}") from None
    if not isinstance(raw, dict) or not isinstance(raw.get("pairs"), list):
        raise ManifestError('manifest must be an object with a "pairs" list')
    if not raw["pairs"]:
        raise ManifestError("manifest contains no pairs")
    pairs = []
    for i, entry in enumerate(raw["pairs"]):
        if not isinstance(entry, dict):
            raise ManifestError(f"pair {i} is not an object")
        missing = [key for key in ("label", "file", "x", "y") if key not in entry]
        if missing:
            raise ManifestError(f"pair {i} is missing keys: {', '.join(missing)}")
        pairs.append(
            PairSpec(
                label=str(entry["label"]),
                file=str(path.parent / str(entry["file"])),
                x=str(entry["x"]),
                y=str(entry["y"]),
            )
        )
    labels = [p.label for p in pairs]
    if len(set(labels)) != len(labels):
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        raise ManifestError(f"duplicate labels in manifest: {', '.join(dupes)}")
    return BatchManifest(pairs=tuple(pairs))


def run_batch_report(
    manifest: BatchManifest,
    config: CdeltaConfig,
    missing_policy: MissingPolicy = MissingPolicy.ERROR,
) -> dict:
    """Compute every pair and rank by rescaled coefficient.

    Rows sort by rescaled value descending, ties broken by label.  Pairs
    that fail (undefined divergence, unreadable files, parse errors) are
    reported under "skipped" instead of aborting the batch.
    """
    rows = []
    skipped = []
    for spec in manifest.pairs:
        try:
            sample = ingest_csv(spec.file, spec.x, spec.y, missing_policy)
            report = rescaled_cdelta(sample, config)
            rows.append(
                {
                    "label": spec.label,
                    "cdelta": report.observed.value,
                    "cdelta_max": report.cdelta_max,
                    "rescaled": report.rescaled,
                    "pearson": pearson(sample).r,
                    "spearman": spearman(sample).r,
                }
            )
        except UndefinedDivergence as err:
            skipped.append({"label": spec.label, "status": "undefined", "message": str(err)})
        except FileNotFoundError:
            skipped.append(
                {"label": spec.label, "status": "file_not_found", "message": spec.file}
            )
        except CdeltaError as err:
            skipped.append({"label": spec.label, "status": err.kind, "message": str(err)})
    rows.sort(key=lambda row: (-row["rescaled"], row["label"]))
    for rank, row in enumerate(rows, start=1):
        row["rank"] = rank
    ordered = [
        {key: row[key] for key in ("rank", "label", "cdelta", "cdelta_max",
                                   "rescaled", "pearson", "spearman")}
        for row in rows
    ]
    return {
        "variant": config.variant.value,
        "normalization": config.normalization.value,
        "rows": ordered,
        "skipped": skipped,
        "version": __version__,
    }


def render_batch_text(doc: dict) -> str:
    header = ("rank", "label", "cdelta", "cdelta_max", "rescaled", "pearson", "spearman")
    table = [header]
    for row in doc["rows"]:
        table.append(
            (
                str(row["rank"]),
                row["label"],
                _fmt(row["cdelta"]),
                _fmt(row["cdelta_max"]),
                _fmt(row["rescaled"]),
                _fmt(row["pearson"]),
                _fmt(row["spearman"]),
            )
        )
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
    for entry in doc["skipped"]:
        lines.append(f"-- {entry['label']}: {entry['status']} ({entry['message']})")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# argument parsing and dispatch
# --------------------------------------------------------------------------


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return value


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--variant",
        choices=[v.value for v in Variant],
        default=Variant.SQUARED.value,
        help="divergence magnitude (default: squared)",
    )
    parser.add_argument(
        "--normalization",
        choices=[n.value for n in Normalization],
        default=Normalization.RAW.value,
        help="denominator convention (default: raw, which reproduces the "
        "published worked numbers)",
    )
    parser.add_argument(
        "--missing",
        choices=[p.value for p in MissingPolicy],
        default=MissingPolicy.ERROR.value,
        help="policy for empty cells (default: error)",
    )
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="emit the JSON report")
    output.add_argument(
        "--text", action="store_true", help="emit the text report (default)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdelta",
        description="Correlation of divergency between two paired groups of values.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="compute the coefficient for one CSV pair")
    compute.add_argument("--input", required=True, help="CSV file to read")
    compute.add_argument("--x", required=True, help="x column (header name or 0-based index)")
    compute.add_argument("--y", required=True, help="y column (header name or 0-based index)")
    compute.add_argument(
        "--rescale",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="include self-similarities and the rescaled value (default: on)",
    )
    compute.add_argument(
        "--permutations",
        type=_nonnegative_int,
        default=0,
        metavar="K",
        help="Monte Carlo null size; 0 disables benchmarking (default: 0)",
    )
    compute.add_argument(
        "--seed",
        type=_nonnegative_int,
        default=0,
        help="seed for the permutation null (default: 0)",
    )
    _add_shared_flags(compute)
    compute.set_defaults(func=_cmd_compute)

    batch = sub.add_parser("batch", help="rank labeled CSV pairs from a JSON manifest")
    batch.add_argument("--manifest", required=True, help="JSON manifest of labeled pairs")
    _add_shared_flags(batch)
    batch.set_defaults(func=_cmd_batch)
    return parser


def _config_from(args: argparse.Namespace) -> CdeltaConfig:
    return CdeltaConfig(
        variant=Variant(args.variant),
        normalization=Normalization(args.normalization),
    )


def _emit(doc: dict, as_json: bool, render) -> None:
    if as_json:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(render(doc))


def _cmd_compute(args: argparse.Namespace) -> int:
    sample = ingest_csv(args.input, args.x, args.y, MissingPolicy(args.missing))
    doc = compute_report(
        sample,
        _config_from(args),
        rescale=args.rescale,
        permutations=args.permutations,
        seed=args.seed,
    )
    _emit(doc, args.json, render_text)
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    doc = run_batch_report(manifest, _config_from(args), MissingPolicy(args.missing))
    _emit(doc, args.json, render_batch_text)
    return 0


def _emit_error(kind: str, message: str, context: dict) -> None:
    sys.stderr.write(
        json.dumps({"error": kind, "message": message, "context": context}) + "\n"
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UndefinedDivergence as err:
        _emit_error(err.kind, str(err), err.context)
        return 2
    except CdeltaError as err:
        _emit_error(err.kind, str(err), err.context)
        return 1
    except FileNotFoundError as err:
        _emit_error("file_not_found", str(err), {"path": str(err.filename)})
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
