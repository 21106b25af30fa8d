"""Command line front end.

Runs in process by default; --server posts the same request to a running
service instance.  Exit codes: 0 success, 1 verification failure, 2 bad usage.
"""

import argparse
import re
import sys
from typing import Optional

from pydantic import ValidationError

from .service.models import (
    GainSpec,
    RangeSpec,
    RegionSpec,
    RunConfig,
    StateSpec,
    TableResponse,
    VerifyResponse,
)

__all__ = ["main", "parse_gain", "parse_range", "parse_region", "parse_state"]


def parse_range(text: str) -> RangeSpec:
    """a:b:step, a:b (step 1) or a single value."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    if len(vals) == 1:
        return RangeSpec(start=vals[0], stop=vals[0], step=1.0)
    if len(vals) == 2:
        return RangeSpec(start=vals[0], stop=vals[1], step=1.0)
    if len(vals) == 3:
        return RangeSpec(start=vals[0], stop=vals[1], step=vals[2])
    raise argparse.ArgumentTypeError(f"bad range {text!r}")


def parse_state(text: str) -> StateSpec:
    kind, _, arg = text.partition(":")
    try:
        if kind == "fock1":
            if arg:
                raise ValueError
            return StateSpec(kind="fock1")
        if kind == "sqfock1":
            return StateSpec(kind="sqfock1", t=float(arg))
        if kind == "attenuated":
            return StateSpec(kind="attenuated", eta=float(arg))
    except (ValueError, ValidationError):
        pass
    raise argparse.ArgumentTypeError(
        f"bad state {text!r}; want fock1, sqfock1:<t> or attenuated:<eta>")


def parse_gain(text: str) -> GainSpec:
    if text in ("unity", "optimal", "ralph"):
        return GainSpec(mode=text)
    if text.startswith("G="):
        try:
            return GainSpec(mode="fixed", value=float(text[2:]))
        except (ValueError, ValidationError):
            pass
    raise argparse.ArgumentTypeError(
        f"bad gain {text!r}; want unity, optimal, ralph or G=<x>")


def parse_region(text: str) -> RegionSpec:
    kind, _, arg = text.partition(":")
    try:
        if kind == "point":
            if arg:
                raise ValueError
            return RegionSpec(kind="point")
        if kind in ("disk", "square"):
            return RegionSpec(kind=kind, size=float(arg))
    except (ValueError, ValidationError):
        pass
    raise argparse.ArgumentTypeError(
        f"bad region {text!r}; want disk:<K>, point or square:<a>")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="telewig",
        description="Wigner-function negativity of teleported single photons")
    # ranges like -10:-3:1 start with a minus; widen the negative-number
    # heuristic so argparse keeps them as option values
    p._negative_number_matcher = re.compile(r"^-\d")
    p.add_argument("command",
                   choices=["sweep", "threshold", "conditional", "noisy", "verify"])
    p.add_argument("--state", type=parse_state, default=StateSpec(kind="fock1"),
                   help="input state: fock1, sqfock1:<t> or attenuated:<eta>")
    p.add_argument("--vsq-db", type=parse_range, default=None, metavar="A:B:STEP",
                   help="squeezed-variance grid in dB (single value allowed)")
    p.add_argument("--vsq-r", type=parse_range, default=None, metavar="A:B:STEP",
                   help="squeezing grid in r instead of dB")
    p.add_argument("--gain", type=parse_gain, default=GainSpec(mode="unity"),
                   help="unity, optimal, ralph or G=<x> (default unity)")
    p.add_argument("--region", type=parse_region,
                   default=RegionSpec(kind="none"),
                   help="post-selection region: disk:<K>, point or square:<a>")
    p.add_argument("--eta", type=parse_range, default=None, metavar="A:B:STEP",
                   help="detector/line efficiency grid for threshold tables")
    p.add_argument("--noise-db", type=parse_range, default=None, metavar="A:B:STEP",
                   help="entanglement noise N in dB (single value allowed)")
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    p.add_argument("--seed", type=int, default=20240817)
    p.add_argument("--mc-samples", type=int, default=200_000)
    p.add_argument("--tol", type=float, default=None,
                   help="override verification tolerance")
    p.add_argument("--out", default=None, help="write output to a file")
    p.add_argument("--server", default=None, metavar="URL",
                   help="post the request to a running service instead")
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)
    return p


def _to_config(args) -> RunConfig:
    return RunConfig(command=args.command, state=args.state, vsq_db=args.vsq_db,
                     vsq_r=args.vsq_r, noise_db=args.noise_db, gain=args.gain,
                     region=args.region, eta=args.eta, fmt=args.fmt,
                     seed=args.seed, mc_samples=args.mc_samples, tol=args.tol,
                     perturb=args.perturb)


def render_table(resp: TableResponse) -> str:
    if resp.config.fmt == "json":
        return resp.model_dump_json(indent=2) + "\n"
    lines = [",".join(resp.columns)]
    for row in resp.rows:
        lines.append(",".join(f"{v:.10g}" for v in row))
    return "\n".join(lines) + "\n"


def render_verify(resp: VerifyResponse) -> str:
    if resp.config.fmt == "json":
        return resp.model_dump_json(indent=2) + "\n"
    lines = ["suite,max_dev,tol,passed"]
    for s in resp.suites:
        lines.append(f"{s.name},{s.max_dev:.10g},{s.tol:.10g},{s.passed}")
    lines.append(f"overall,,,{resp.passed}")
    return "\n".join(lines) + "\n"


def _run_remote(server: str, config: RunConfig):
    import httpx

    url = server.rstrip("/") + "/" + config.command
    r = httpx.post(url, json=config.model_dump(), timeout=600.0)
    if r.status_code == 422:
        detail = r.json().get("detail", "invalid request")
        raise _RemoteUsageError(str(detail))
    r.raise_for_status()
    model = VerifyResponse if config.command == "verify" else TableResponse
    return model.model_validate(r.json())


class _RemoteUsageError(ValueError):
    pass


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _to_config(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    from . import reports

    try:
        if args.server is not None:
            resp = _run_remote(args.server, config)
        elif config.command == "verify":
            resp = reports.run_verify(config)
        else:
            resp = reports.run_table(config)
    except (reports.UsageError, _RemoteUsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if isinstance(resp, VerifyResponse):
        _emit(render_verify(resp), args.out)
        return 0 if resp.passed else 1
    _emit(render_table(resp), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
