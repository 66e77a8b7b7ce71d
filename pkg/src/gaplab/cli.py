"""Command-line front end: a thin client over the HTTP service.

Every command posts a JSON request to the service; by default the requests run
against an in-process application instance, and --server targets a remote one
instead.  Outputs are CSV or JSON with \n line endings, and all numeric CSV
fields carry 12 significant digits so fixed configurations reproduce
byte-identical files.

Exit codes: 0 success, 2 invalid configuration, 3 property or numerical
failure, 4 no homotopy path.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from . import __version__
from .formatting import format_sig12
from .service.app import app


class _CliFailure(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliFailure(f"cannot read {path}: {exc}", 2) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliFailure(f"{path} is not valid JSON: {exc}", 2) from exc


def _payload(args, inline: dict) -> dict:
    payload: dict = {"schema": 1}
    if getattr(args, "config", None):
        config = _load_json(args.config)
        if not isinstance(config, dict):
            raise _CliFailure(f"{args.config} must contain a JSON object", 2)
        payload.update(config)
    for key, value in inline.items():
        if value is not None:
            payload[key] = value
    return payload


def _descriptor_arg(args, flag: str, payload: dict, key: str) -> None:
    path = getattr(args, flag, None)
    if path is not None:
        payload[key] = _load_json(path)
    if key not in payload:
        raise _CliFailure(
            f"missing operator: pass --{flag} <path.json> or put {key!r} in --config",
            2,
        )


def _request(path: str, payload: dict, server: str | None) -> httpx.Response:
    async def go() -> httpx.Response:
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=600.0) as client:
                return await client.post(path, json=payload)
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://gaplab.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    try:
        return asyncio.run(go())
    except httpx.HTTPError as exc:
        raise _CliFailure(f"cannot reach server: {exc}", 3) from exc


def _format_detail(detail) -> str:
    if isinstance(detail, list):
        parts = []
        for item in detail[:5]:
            loc = ".".join(str(x) for x in item.get("loc", [])) or "request"
            parts.append(f"{loc}: {item.get('msg', 'invalid')}")
        return "invalid configuration: " + "; ".join(parts)
    return f"invalid configuration: {detail}"


def _ensure_ok(resp: httpx.Response) -> dict:
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {}
    if isinstance(body, dict) and "message" in body:
        msg = f"{body.get('error', 'error')}: {body['message']}"
    elif isinstance(body, dict) and "detail" in body:
        msg = _format_detail(body["detail"])
    else:
        msg = f"unexpected HTTP status {resp.status_code}"
    raise _CliFailure(msg, 2 if resp.status_code == 422 else 3)


def _emit(text: str, out: str | None) -> None:
    data = text.encode("utf-8")
    if out:
        try:
            Path(out).write_bytes(data)
        except OSError as exc:
            raise _CliFailure(f"cannot write {out}: {exc}", 2) from exc
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _csv(header: tuple[str, ...], rows, note: dict | None = None) -> str:
    lines = [",".join(header)]
    for row in rows:
        fields = [str(int(row[0]))]
        fields.extend(format_sig12(x) for x in row[1:])
        lines.append(",".join(fields))
    if note is not None:
        lines.append("# " + json.dumps(note, sort_keys=True))
    return "\n".join(lines) + "\n"


def _cmd_fuglede(args) -> int:
    payload = _payload(args, {"n_max": args.n_max})
    data = _ensure_ok(_request("/v1/fuglede", payload, args.server))
    _emit(_csv(("n", "d_tilde", "gap_sup", "riesz"), data["rows"]), args.out)
    return 0


def _cmd_density(args) -> int:
    payload = _payload(args, {"n_max": args.n_max})
    _descriptor_arg(args, "descriptor", payload, "descriptor")
    data = _ensure_ok(_request("/v1/density", payload, args.server))
    _emit(
        _csv(("n", "riesz_to_t", "gap_to_t", "norm_F_Tn"), data["rows"], data["note"]),
        args.out,
    )
    return 0


def _cmd_suite(args) -> int:
    payload = _payload(
        args, {"seed": args.seed, "trials": args.trials, "dim_max": args.dim_max}
    )
    data = _ensure_ok(_request("/v1/suite", payload, args.server))
    _emit(json.dumps(data, indent=2) + "\n", args.out)
    return 0 if data.get("failures") == 0 else 3


def _cmd_homotopy(args) -> int:
    payload = _payload(args, {"steps": args.steps, "eps_step": args.eps_step})
    _descriptor_arg(args, "a", payload, "a")
    _descriptor_arg(args, "b", payload, "b")
    data = _ensure_ok(_request("/v1/homotopy", payload, args.server))
    if not data["connected"]:
        _emit(
            f"NO-PATH index_a={data['index_a']} index_b={data['index_b']}\n", args.out
        )
        return 4
    lines = ["lambda,index,step_gap"]
    gaps = data["step_gaps"]
    for i, (lam, idx) in enumerate(zip(data["lambdas"], data["indices"])):
        gap = 0.0 if i == 0 else gaps[i - 1]
        lines.append(f"{format_sig12(lam)},{idx},{format_sig12(gap)}")
    lines.append(
        f"CONNECTED index={data['index']} "
        f"max_step_gap={format_sig12(data['max_step_gap'])}"
    )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_metric(args) -> int:
    payload = _payload(args, {"which": args.which})
    _descriptor_arg(args, "a", payload, "a")
    _descriptor_arg(args, "b", payload, "b")
    data = _ensure_ok(_request("/v1/metric", payload, args.server))
    _emit(json.dumps(data, indent=2) + "\n", args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file with request parameters")
    sub.add_argument("--out", help="write output to this file instead of stdout")
    sub.add_argument("--server", help="base URL of a running service (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaplab",
        description="operator metric and index experiments",
    )
    parser.add_argument("--version", action="version", version=f"gaplab {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("fuglede", help="sweep the sign-flip family against its base")
    p.add_argument("--n-max", type=int, help="largest flip position")
    _add_common(p)
    p.set_defaults(func=_cmd_fuglede)

    p = subs.add_parser("density", help="bounded approximants of one operator")
    p.add_argument("--descriptor", help="JSON file with the operator descriptor")
    p.add_argument("--n-max", type=int, help="largest approximation parameter")
    _add_common(p)
    p.set_defaults(func=_cmd_density)

    p = subs.add_parser("suite", help="run the full property battery")
    p.add_argument("--seed", type=int, help="64-bit unsigned PRNG seed")
    p.add_argument("--trials", type=int, help="ensemble size")
    p.add_argument("--dim-max", type=int, help="largest matrix dimension")
    _add_common(p)
    p.set_defaults(func=_cmd_suite)

    p = subs.add_parser("homotopy", help="connect two Fredholm operators")
    p.add_argument("--a", help="JSON descriptor of the first endpoint")
    p.add_argument("--b", help="JSON descriptor of the second endpoint")
    p.add_argument("--steps", type=int, help="initial sample count")
    p.add_argument("--eps-step", type=float, help="largest allowed step gap")
    _add_common(p)
    p.set_defaults(func=_cmd_homotopy)

    p = subs.add_parser("metric", help="one distance between two operators")
    p.add_argument("--a", help="JSON descriptor of the first operator")
    p.add_argument("--b", help="JSON descriptor of the second operator")
    p.add_argument(
        "--which",
        choices=["gap_proj", "gap_sup", "riesz", "tilde"],
        help="which metric to evaluate",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_metric)

    p = subs.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
