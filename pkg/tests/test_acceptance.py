"""Acceptance criteria, one test per criterion.

Each test records a single ``PASS``/``FAIL`` line with the measured numbers;
the lines are printed as they happen and again in the pytest summary.
"""

import statistics
import subprocess
import sys
import time

import numpy as np

from noisykex import gf2, lab, params as P, protocols as proto, wire
from noisykex.errors import WireFormatError
from noisykex.gf2 import BitMatrix
from noisykex.rand import make_rng, randint, spawn

from conftest import ACCEPTANCE_LINES

HANDSHAKE_PRESETS = ["toy-16", "small-32", "mid-64", "lean-128"]


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} ({title}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _handshakes(runner, expected_key, rng, per_preset=100, refresh=10):
    """Run ``per_preset`` handshakes per preset, fresh secret every ``refresh``."""
    failures, counts = [], {}
    for name in HANDSHAKE_PRESETS:
        params = P.preset(name)
        good = 0
        for i in range(per_preset):
            if i % refresh == 0:
                sp = P.generate(params, rng)
            res = runner(sp, rng)
            ok, why = expected_key(sp, res)
            if ok:
                good += 1
            else:
                failures.append(f"{name}: {why}")
        counts[name] = good
    return counts, failures


def test_c01_dhwe_correctness():
    proto.run_dhwe(P.generate(P.preset("toy-16"), make_rng(0)), make_rng(0))  # JIT warm-up

    def check(sp, res):
        closed = gf2.column(gf2.power(sp.M, res.alice.alpha * res.bob.beta), sp.j)
        return res.alice_key == res.bob_key == closed, "k_A, k_B, closed form disagree"

    t0 = time.perf_counter()
    counts, failures = _handshakes(proto.run_dhwe, check, make_rng(101))
    elapsed = time.perf_counter() - t0
    summary = ", ".join(f"{k} {v}/100" for k, v in counts.items())
    record(1, "DH-WE correctness", not failures and elapsed < 10,
           f"{summary}; {elapsed:.2f} s total (limit 10 s)")


def test_c02_rsar_correctness():
    def check(sp, res):
        a, b = res.alice, res.bob
        if a.e * a.d % sp.phi != 1:
            return False, "e*d != 1 mod phi"
        closed = gf2.column(gf2.power(sp.M, b.theta + a.alpha * b.vartheta), sp.j)
        return res.alice_key == res.bob_key == closed, "k_A, k_B, closed form disagree"

    t0 = time.perf_counter()
    counts, failures = _handshakes(proto.run_rsar, check, make_rng(102))
    elapsed = time.perf_counter() - t0
    summary = ", ".join(f"{k} {v}/100" for k, v in counts.items())
    record(2, "RSA-R correctness", not failures,
           f"{summary}; e*d = 1 mod phi in every run; {elapsed:.2f} s")


def _in_rowspace_of_q(x: BitMatrix, Q: BitMatrix, rank_q: int) -> bool:
    return gf2.rank(gf2.vstack(x, Q)) == rank_q


def test_c03_noise_absorption_identities():
    rng = make_rng(103)
    names = ["toy-8", "toy-16", "small-32", "mid-64", "lean-128"] * 2
    failures = {"MQ=QM=Q": 0, "noisy power": 0, "noisy product": 0, "key column": 0}
    draws = 0
    for name in names:
        sp = P.generate(P.preset(name), rng)
        M, Q, n = sp.M, sp.Q, sp.n
        rank_q = gf2.rank(Q)
        for _ in range(100):
            draws += 1
            alpha, theta, vartheta = (randint(rng, 0, 1 << 16) for _ in range(3))
            R, S1, S2 = (gf2.random_matrix(n, rng) for _ in range(3))
            m_theta = gf2.power(M, theta)
            if not (m_theta @ Q == Q and Q @ m_theta == Q):
                failures["MQ=QM=Q"] += 1
            lhs = gf2.power(gf2.power(M, alpha) + R @ Q, theta)
            residual = lhs + gf2.power(M, alpha * theta)
            if not _in_rowspace_of_q(residual, Q, rank_q):
                failures["noisy power"] += 1
            if gf2.column(residual, sp.j) != gf2.column(BitMatrix.zeros(n), sp.j):
                failures["key column"] += 1
            prod = (m_theta + S1 @ Q) @ (gf2.power(M, vartheta) + S2 @ Q)
            if not _in_rowspace_of_q(prod + gf2.power(M, theta + vartheta), Q, rank_q):
                failures["noisy product"] += 1
    total = sum(failures.values())
    detail = f"{len(names)} parameter sets x 100 draws = {draws}; failures " + ", ".join(
        f"{k}: {v}" for k, v in failures.items())
    record(3, "noise-absorption identities", total == 0, detail)


def test_c04_structural_invariants():
    rng = make_rng(104)
    params = P.preset("toy-16")
    failed: dict[str, int] = {}
    for child in spawn(rng, 1000):
        sp = P.generate(params, child)
        for check in P.validate(sp).failed:
            failed[check] = failed.get(check, 0) + 1
    record(4, "structural invariants", not failed,
           f"1000 generations at n = 16; failed checks: {failed or 'none'}")


def test_c05_dlp_contrast():
    contrast = lab.dlp_contrast(P.preset("toy-8"), 100, 1 << 8, make_rng(105))
    clean, noisy = contrast.clean, contrast.noisy
    lo, hi = noisy.wilson()
    record(5, "clean vs noisy DLP", clean.hits == 100 and noisy.rate < 0.05,
           f"clean recovered {clean.hits}/100; noisy matched {noisy.hits}/100 "
           f"(rate {noisy.rate:.3f}, 95% CI [{lo:.3f}, {hi:.3f}], limit < 0.05)")


def test_c06_constant_distinguisher():
    params = P.preset("toy-16")
    parts, ok = [], True
    for kind, seed in (("dhwe", 1061), ("rsar", 1062)):
        rep = lab.run_distinguisher(kind, lab.constant_strategy(0), 10_000, params, make_rng(seed))
        band = 4 * rep.sigma
        ok &= rep.advantage <= band
        parts.append(f"{kind} adv {rep.advantage:.4f} (4 sigma = {band:.3f})")
    record(6, "constant-guess advantage", ok, "; ".join(parts) + "; 10^4 trials each")


def test_c07_root_recovery_experiment():
    t0 = time.perf_counter()
    rep = lab.root_recovery_experiment(6, 10_000, (3, 31), make_rng(107))
    elapsed = time.perf_counter() - t0
    s_lo, s_hi = rep.singular.wilson()
    c_lo, c_hi = rep.control.wilson()
    ok = rep.control.trials > 0 and rep.control.rate == 1.0 and rep.mismatches == 0
    record(7, "root-recovery experiment, n = 6", ok,
           f"singular arm d' exists in {rep.singular.hits}/{rep.singular.trials} "
           f"= {rep.singular.rate:.4f} [95% CI {s_lo:.4f}, {s_hi:.4f}] (reported, not asserted); "
           f"control {rep.control.hits}/{rep.control.trials} = {rep.control.rate:.4f} "
           f"[{c_lo:.4f}, {c_hi:.4f}]; search/prediction mismatches {rep.mismatches}; {elapsed:.1f} s")


def test_c08_power_matches_repeated_multiplication():
    rng = make_rng(108)
    bad = 0
    for _ in range(1000):
        a = gf2.random_matrix(8, rng)
        k = int(rng.integers(0, 65))
        dense = a.to_array().astype(np.int64)
        expect = np.eye(8, dtype=np.int64)
        for _ in range(k):
            expect = (expect @ dense) % 2
        bad += not np.array_equal(gf2.power(a, k).to_array(), expect)
    record(8, "power vs repeated multiplication", bad == 0,
           f"1000 random 8x8 matrices, k in [0, 64]; disagreements {bad}")


def _random_frames(rng, count):
    secrets = {name: P.generate(P.preset(name), rng) for name in ("toy-6", "toy-10", "toy-16", "small-32")}
    pools = list(secrets.values())
    frames = []
    for i in range(count):
        sp = pools[int(rng.integers(len(pools)))]
        kind = i % 5
        if kind == 0:
            msg = proto.dhwe_alice_init(sp, rng)[1]
        elif kind == 1:
            msg = proto.DhweReplyMsg(gf2.random_matrix(sp.n, rng), sp.params.l, sp.j)
        elif kind == 2:
            msg = proto.rsar_alice_init(sp, rng)[1]
        elif kind == 3:
            msg = proto.RsarReplyMsg(gf2.random_matrix(sp.n, rng), sp.params.l, sp.j)
        else:
            msg = sp.params if rng.integers(2) else P.preset(next(k for k, v in secrets.items() if v is sp))
        frames.append(wire.encode_message(msg))
    return frames


def _rejected(data: bytes) -> bool:
    try:
        wire.decode_message(data)
    except WireFormatError:
        return True
    return False


def test_c09_wire_format():
    rng = make_rng(109)
    frames = _random_frames(rng, 10_000)
    mismatched = sum(wire.encode_message(wire.decode_message(f)) != f for f in frames)
    accepted = {"magic": 0, "length": 0, "padding": 0}
    tried = {"magic": 0, "length": 0, "padding": 0}
    for f in frames[:2000]:
        tried["magic"] += 1
        accepted["magic"] += not _rejected(bytes([f[0] ^ 0x20]) + f[1:])
        tried["length"] += 2
        cut = int(rng.integers(1, len(f)))
        accepted["length"] += not _rejected(f[:cut])
        accepted["length"] += not _rejected(f + b"\x00")
        n = int.from_bytes(f[6:10], "little")
        if n % 8 and f[5] != wire.MsgType.PARAMS:
            tried["padding"] += 1
            rb = (n + 7) // 8
            row = int(rng.integers(n))
            pos = wire.HEADER.size + row * rb + rb - 1
            bad = bytearray(f)
            bad[pos] |= 0x80
            accepted["padding"] += not _rejected(bytes(bad))
    ok = mismatched == 0 and not any(accepted.values()) and all(tried.values())
    record(9, "wire format", ok,
           f"10^4 round-trips, {mismatched} not byte-identical; malformed frames accepted: "
           + ", ".join(f"{k} {accepted[k]}/{tried[k]}" for k in tried))


def test_c10_live_loopback_demo():
    servers, banners = [], []
    try:
        for protocol in ("dhwe", "rsar"):
            srv = subprocess.Popen(
                [sys.executable, "-m", "noisykex.cli", "serve", "--protocol", protocol,
                 "--preset", "lean-128", "--once"],
                stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
            servers.append(srv)
            banners.append(srv.stdout.readline())
        assert all(b.startswith("listening") for b in banners), banners
        t0 = time.perf_counter()
        clients = [
            subprocess.run([sys.executable, "-m", "noisykex.cli", "connect", b.split()[1]],
                           capture_output=True, text=True, timeout=30)
            for b in banners
        ]
        elapsed = time.perf_counter() - t0
        server_outs = [s.communicate(timeout=30)[0] for s in servers]
    finally:
        for s in servers:
            s.kill()
    matches = []
    for client, out in zip(clients, server_outs):
        ckey = next((ln for ln in client.stdout.splitlines() if ln.startswith("key ")), None)
        skey = next((ln for ln in out.splitlines() if ln.startswith("key ")), None)
        matches.append(client.returncode == 0 and ckey is not None and ckey == skey)
    record(10, "serve/connect on loopback", all(matches) and elapsed < 2.0,
           f"dhwe keys match: {matches[0]}, rsar keys match: {matches[1]}; "
           f"both client runs {elapsed:.2f} s wall (limit 2 s, n = 128, fresh client processes)")


def test_c11_performance_floor():
    rng = make_rng(111)
    a, b = gf2.random_matrix(128, rng), gf2.random_matrix(128, rng)
    gf2.mul(a, b)
    reps = 2000
    t0 = time.perf_counter()
    for _ in range(reps):
        gf2.mul(a, b)
    per_mul = (time.perf_counter() - t0) / reps
    sp = P.generate(P.preset("lean-128"), rng)
    proto.run_dhwe(sp, rng)
    times = []
    for _ in range(10):
        t0 = time.perf_counter()
        res = proto.run_dhwe(sp, rng)
        times.append(time.perf_counter() - t0)
        assert res.matched
    worst = max(times)
    record(11, "performance floor", per_mul <= 1e-3 and worst <= 1.0,
           f"mul at n = 128: {per_mul * 1e6:.1f} us (limit 1000 us); DH-WE handshake at n = 128: "
           f"median {statistics.median(times) * 1e3:.1f} ms, worst {worst * 1e3:.1f} ms (limit 1000 ms)")
