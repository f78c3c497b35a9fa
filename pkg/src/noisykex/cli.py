"""Command-line entry point (``nqkx``).

Public material (parameters, protocol messages) travels as wire frames.
Secret material (``F``, exponents) lives only in JSON files created with
mode 0600 and never enters a frame.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import threading
import time
from pathlib import Path

from . import gf2, lab, params as P, protocols as proto
from .errors import NoisyKexError, ProtocolAbort
from .gf2 import BitMatrix
from .net import HandshakeServer, connect, parse_address
from .rand import make_rng, randint
from .wire import decode_message, encode_message

EXIT_OK, EXIT_ABORT, EXIT_USAGE = 0, 1, 2
SECRET_FORMAT = "nqkx-secret-v1"
STATE_FORMAT = "nqkx-state-v1"


class UsageError(Exception):
    pass


# -- files -----------------------------------------------------------------------------

def write_private(path: str | os.PathLike, payload: dict) -> None:
    """Create (or truncate) ``path`` with mode 0600 before any byte is written."""
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
    os.fchmod(fd, 0o600)
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh, indent=1)


def _read_frame(path: str):
    return decode_message(Path(path).read_bytes())


def _write_frame(path: str, msg) -> None:
    Path(path).write_bytes(encode_message(msg))


def secret_to_json(sp: P.SecretParams) -> dict:
    return {
        "format": SECRET_FORMAT,
        "n": sp.params.n,
        "l": sp.params.l,
        "j": sp.j,
        "polys": [{"mask": hex(p.mask), "known_order": p.known_order} for p in sp.params.polys],
        "F": [format(row, "x") for row in sp.F.int_rows()],
    }


def secret_from_json(doc: dict) -> P.SecretParams:
    if doc.get("format") != SECRET_FORMAT:
        raise UsageError("not a secret-parameter file")
    polys = tuple(P.PolySpec(int(p["mask"], 16), p["known_order"]) for p in doc["polys"])
    params = P.SystemParams(doc["n"], doc["l"], polys)
    F = BitMatrix.from_int_rows([int(row, 16) for row in doc["F"]], doc["n"])
    return P.assemble(params, F, doc["j"])


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not JSON ({exc})") from None


# -- argument helpers ------------------------------------------------------------------

def _rng(args):
    if args.seed is not None and not args.insecure_deterministic:
        raise UsageError("--seed requires --insecure-deterministic")
    if args.insecure_deterministic and args.seed is None:
        raise UsageError("--insecure-deterministic requires --seed")
    return make_rng(args.seed)


def _params_from_args(args) -> P.SystemParams:
    if args.preset:
        if args.n or args.l or args.polys:
            raise UsageError("--preset excludes --n/--l/--polys")
        try:
            return P.preset(args.preset)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
    if not (args.n and args.l):
        raise UsageError("give --preset, or --n and --l (and optionally --polys)")
    m = args.n - args.l
    if args.polys:
        polys = tuple(P.PolySpec.parse(t) for t in args.polys.split(","))
    else:
        if not 2 <= m <= 128:
            raise UsageError("without --polys, n - l must lie in [2, 128]")
        polys = (P.primitive_poly(m),)
    return P.SystemParams(args.n, args.l, polys)


def _secret_for_run(args, rng) -> P.SecretParams:
    if getattr(args, "secret", None):
        return secret_from_json(_load_json(args.secret))
    return P.generate(P.preset(args.preset), rng)


# -- commands --------------------------------------------------------------------------

def cmd_params_gen(args) -> int:
    params = _params_from_args(args)
    rng = _rng(args)
    sp = P.generate(params, rng)
    report = P.validate(sp)
    if not report.ok:
        print(report, file=sys.stderr)
        return EXIT_ABORT
    write_private(args.secret_out, secret_to_json(sp))
    if args.out:
        _write_frame(args.out, sp.params)
    print(f"n={params.n} l={params.l} j={sp.j} r={sp.r} phi={sp.phi}")
    print("polys: " + ", ".join(str(p) for p in params.polys))
    return EXIT_OK


def cmd_params_list(args) -> int:
    for name, params in P.PRESETS.items():
        print(f"{name:10s} n={params.n:4d} l={params.l:3d} polys={', '.join(str(p) for p in params.polys)}")
    return EXIT_OK


def _alice_init(args, protocol: str) -> int:
    rng = _rng(args)
    sp = secret_from_json(_load_json(args.secret))
    if protocol == "dhwe":
        state, msg = proto.dhwe_alice_init(sp, rng)
        extra = {}
    else:
        state, msg = proto.rsar_alice_init(sp, rng)
        extra = {"e": state.e, "d": state.d}
    write_private(args.state, {
        "format": STATE_FORMAT, "protocol": protocol, "secret": secret_to_json(sp),
        "alpha": state.alpha, **extra,
    })
    _write_frame(args.out, msg)
    return EXIT_OK


def _bob_respond(args, protocol: str) -> int:
    rng = _rng(args)
    msg = _read_frame(args.inp)
    if protocol == "dhwe":
        if not isinstance(msg, proto.DhweInitMsg):
            raise ProtocolAbort(f"expected a DH-WE init frame, got {type(msg).__name__}")
        _, reply, key = proto.dhwe_bob_respond(msg, rng)
    else:
        if not isinstance(msg, proto.RsarInitMsg):
            raise ProtocolAbort(f"expected an RSA-R init frame, got {type(msg).__name__}")
        _, reply, key = proto.rsar_bob_respond(msg, rng)
    _write_frame(args.out, reply)
    print(f"key {key.hex()}")
    return EXIT_OK


def _alice_finish(args, protocol: str) -> int:
    doc = _load_json(args.state)
    if doc.get("format") != STATE_FORMAT or doc.get("protocol") != protocol:
        raise UsageError(f"{args.state} is not a {protocol} state file")
    sp = secret_from_json(doc["secret"])
    reply = _read_frame(args.inp)
    if protocol == "dhwe":
        state = proto.AliceDhweState(sp, doc["alpha"])
        state.phase = proto.Phase.SENT  # resumed after a persisted init
        key = proto.dhwe_alice_finish(state, reply)
    else:
        state = proto.AliceRsarState(sp, doc["alpha"], doc["e"], doc["d"])
        state.phase = proto.Phase.SENT
        key = proto.rsar_alice_finish(state, reply)
    print(f"key {key.hex()}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    rng = _rng(args)
    sp = _secret_for_run(args, rng)
    ok = True
    for name, run in (("dhwe", proto.run_dhwe), ("rsar", proto.run_rsar)):
        for _ in range(args.rounds):
            result = run(sp, rng)
            ok &= result.matched
            print(f"{name} alice {result.alice_key.hex()} bob {result.bob_key.hex()} "
                  f"{'match' if result.matched else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_ABORT


def cmd_serve(args) -> int:
    rng = _rng(args)
    sp = _secret_for_run(args, rng)
    lock = threading.Lock()
    done = threading.Event()

    def on_result(peer, key, error):
        with lock:
            if error is not None:
                print(f"abort {peer[0]}:{peer[1]} {type(error).__name__}: {error}", flush=True)
            else:
                print(f"key {key.hex()}", flush=True)
        if args.once:
            done.set()

    host, port = parse_address(args.listen)
    server = HandshakeServer((host, port), sp, args.protocol, rng=rng, confirm=args.confirm,
                             on_result=on_result)
    with server:
        bound = server.address
        print(f"listening {bound[0]}:{bound[1]} protocol={args.protocol} n={sp.n}", flush=True)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            while not done.wait(0.2):
                pass
        except KeyboardInterrupt:
            pass
        server.shutdown()
    return EXIT_OK


def cmd_connect(args) -> int:
    rng = _rng(args)
    outcome = connect(parse_address(args.address), rng=rng, confirm=args.confirm, timeout_s=args.timeout)
    print(f"protocol {outcome.protocol}")
    print(f"key {outcome.key.hex()}")
    if outcome.confirmed is not None:
        print("confirmed")
    return EXIT_OK


def cmd_lab_dlp(args) -> int:
    rng = _rng(args)
    params = lab.params_for_dimension(args.n)
    sp = P.generate(params, rng)
    cap = args.cap or sp.phi
    planted = randint(rng, 2, sp.phi - 1)
    target = gf2.power(sp.M, planted)
    t0 = time.perf_counter()
    recovered = lab.bruteforce_matrix_dlp(sp.M, target, cap)
    elapsed = time.perf_counter() - t0
    A = gf2.add(sp.M, proto.noise(sp, rng))
    B = gf2.add(target, proto.noise(sp, rng))
    noisy = lab.bruteforce_matrix_dlp(A, B, cap)
    print(f"n={params.n} order(M)={sp.phi} cap={cap}")
    print(f"planted {planted}")
    print(f"recovered {recovered} ({elapsed * 1e3:.1f} ms) {'match' if recovered == planted else 'no match'}")
    print(f"noisy instance: {'exponent ' + str(noisy) if noisy is not None else 'no exponent found'}")
    if args.trials:
        contrast = lab.dlp_contrast(params, args.trials, cap, rng)
        print(json.dumps(contrast.as_dict(), sort_keys=True))
    return EXIT_OK if recovered == planted else EXIT_ABORT


_STRATEGIES = {
    "constant0": lambda a: lab.constant_strategy(0),
    "constant1": lambda a: lab.constant_strategy(1),
    "bitcount": lambda a: lab.bitcount_strategy,
    "key-search": lambda a: lab.key_search_strategy(a.cap),
}


def cmd_lab_distinguish(args) -> int:
    rng = _rng(args)
    params = P.preset(args.preset)
    rows = []
    for kind in (["dhwe", "rsar"] if args.kind == "both" else [args.kind]):
        report = lab.run_distinguisher(kind, _STRATEGIES[args.strategy](args), args.trials, params, rng,
                                       noiseless=args.noiseless)
        print(report.to_json_line())
        rows.append({**report.as_dict(), "kind": kind, "preset": args.preset, "noiseless": args.noiseless})
    if args.csv:
        lab.write_csv(rows, args.csv)
    return EXIT_OK


def cmd_lab_tail(args) -> int:
    rng = _rng(args)
    report = lab.root_recovery_experiment(args.n, args.trials, rng=rng)
    print(report.to_json_line())
    if args.csv:
        rows = [{"arm": arm, **getattr(report, arm).as_dict()} for arm in ("singular", "control")]
        lab.write_csv(rows, args.csv)
    return EXIT_OK


def cmd_lab_scaling(args) -> int:
    rng = _rng(args)
    rows = lab.key_search_scaling(args.presets.split(","), args.trials, rng)
    for row in rows:
        print(json.dumps(row, sort_keys=True))
    if args.csv:
        lab.write_csv(rows, args.csv)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="fixed RNG seed (needs --insecure-deterministic)")
    common.add_argument("--insecure-deterministic", action="store_true",
                        help="allow --seed; every secret becomes reproducible")

    parser = argparse.ArgumentParser(prog="nqkx", description="Noisy matrix-power key agreement over GF(2).")
    sub = parser.add_subparsers(dest="command", required=True)

    params = sub.add_parser("params", help="system parameters").add_subparsers(dest="action", required=True)
    gen = params.add_parser("gen", parents=[common], help="generate a secret parameter set")
    gen.add_argument("--preset")
    gen.add_argument("--n", type=int)
    gen.add_argument("--l", type=int)
    gen.add_argument("--polys", help='comma-separated, e.g. "x^4+x+1,x^2+x+1"')
    gen.add_argument("--out", help="public parameters frame")
    gen.add_argument("--secret-out", required=True, help="secret JSON (written 0600)")
    gen.set_defaults(func=cmd_params_gen)
    params.add_parser("list", help="show presets").set_defaults(func=cmd_params_list)

    for protocol in ("dhwe", "rsar"):
        steps = sub.add_parser(protocol, help=f"{protocol} handshake, one step per call").add_subparsers(
            dest="step", required=True)
        init = steps.add_parser("init", parents=[common], help="Alice: first message")
        init.add_argument("--secret", required=True)
        init.add_argument("--out", required=True)
        init.add_argument("--state", required=True, help="Alice state JSON (written 0600)")
        init.set_defaults(func=lambda a, p=protocol: _alice_init(a, p))
        respond = steps.add_parser("respond", parents=[common], help="Bob: reply and print key")
        respond.add_argument("--in", dest="inp", required=True)
        respond.add_argument("--out", required=True)
        respond.set_defaults(func=lambda a, p=protocol: _bob_respond(a, p))
        finish = steps.add_parser("finish", help="Alice: consume reply and print key")
        finish.add_argument("--state", required=True)
        finish.add_argument("--in", dest="inp", required=True)
        finish.set_defaults(func=lambda a, p=protocol: _alice_finish(a, p))

    st = sub.add_parser("selftest", parents=[common], help="in-process handshakes, both protocols")
    st.add_argument("--preset", default="toy-16", choices=sorted(P.PRESETS))
    st.add_argument("--secret")
    st.add_argument("--rounds", type=int, default=1)
    st.set_defaults(func=cmd_selftest)

    srv = sub.add_parser("serve", parents=[common], help="play Alice over TCP")
    srv.add_argument("--listen", default="127.0.0.1:0")
    srv.add_argument("--protocol", choices=["dhwe", "rsar"], default="dhwe")
    srv.add_argument("--preset", default="lean-128", choices=sorted(P.PRESETS))
    srv.add_argument("--secret")
    srv.add_argument("--once", action="store_true", help="exit after one handshake")
    srv.add_argument("--confirm", action="store_true", help="send key confirmation bytes (test mode)")
    srv.set_defaults(func=cmd_serve)

    con = sub.add_parser("connect", parents=[common], help="play Bob over TCP")
    con.add_argument("address")
    con.add_argument("--confirm", action="store_true")
    con.add_argument("--timeout", type=float, default=30.0)
    con.set_defaults(func=cmd_connect)

    lab_sub = sub.add_parser("lab", help="assumption experiments").add_subparsers(dest="experiment", required=True)
    dlp = lab_sub.add_parser("dlp-demo", parents=[common], help="brute-force DLP, clean versus noisy")
    dlp.add_argument("--n", type=int, default=8)
    dlp.add_argument("--cap", type=int)
    dlp.add_argument("--trials", type=int, default=0)
    dlp.set_defaults(func=cmd_lab_dlp)
    dist = lab_sub.add_parser("distinguish", parents=[common], help="score a distinguisher")
    dist.add_argument("--kind", choices=["dhwe", "rsar", "both"], default="both")
    dist.add_argument("--strategy", choices=sorted(_STRATEGIES), default="constant0")
    dist.add_argument("--preset", default="toy-16", choices=sorted(P.PRESETS))
    dist.add_argument("--trials", type=int, default=1000)
    dist.add_argument("--cap", type=int, default=256, help="exponent cap for key-search")
    dist.add_argument("--noiseless", action="store_true")
    dist.add_argument("--csv")
    dist.set_defaults(func=cmd_lab_distinguish)
    tail = lab_sub.add_parser("tail", parents=[common], help="root-finding frequency for singular powers")
    tail.add_argument("--n", type=int, default=6)
    tail.add_argument("--trials", type=int, default=1000)
    tail.add_argument("--csv")
    tail.set_defaults(func=cmd_lab_tail)
    sc = lab_sub.add_parser("scaling", parents=[common], help="key-search work versus preset size")
    sc.add_argument("--presets", default="toy-8,toy-10,toy-12")
    sc.add_argument("--trials", type=int, default=20)
    sc.add_argument("--csv")
    sc.set_defaults(func=cmd_lab_scaling)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProtocolAbort as exc:
        print(f"protocol abort: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except ValueError as exc:
        print(f"usage error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoisyKexError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
