import json
import os
import socket
import stat
import subprocess
import sys
import threading
import time

import pytest

from noisykex import cli, net, wire
from noisykex.errors import ProtocolAbort, WireFormatError
from noisykex.rand import make_rng


class LiveServer:
    def __init__(self, sp, protocol, confirm=False):
        self.results = []
        self.event = threading.Event()

        def on_result(peer, key, error):
            self.results.append((key, error))
            self.event.set()

        self.server = net.HandshakeServer(("127.0.0.1", 0), sp, protocol, rng=make_rng(1),
                                          confirm=confirm, on_result=on_result, timeout_s=5)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()

    def wait(self):
        assert self.event.wait(5)
        self.event.clear()
        return self.results[-1]


@pytest.mark.parametrize("protocol", ["dhwe", "rsar"])
@pytest.mark.parametrize("confirm", [False, True])
def test_loopback_handshake(protocol, confirm, secret_for):
    with LiveServer(secret_for("toy-16"), protocol, confirm) as live:
        out = net.connect(live.server.address, rng=make_rng(2), confirm=confirm)
        key, err = live.wait()
        assert err is None and out.protocol == protocol
        assert out.key == key
        assert out.confirmed is (True if confirm else None)


def test_server_handles_concurrent_clients(secret_for):
    with LiveServer(secret_for("small-32"), "dhwe") as live:
        outs = [None] * 6

        def client(i):
            outs[i] = net.connect(live.server.address, rng=make_rng(10 + i))

        threads = [threading.Thread(target=client, args=(i,)) for i in range(6)]
        for t in threads:
            t.start()
        for t in threads:
            t.join(10)
        time.sleep(0.1)
        server_keys = {k.hex() for k, e in live.results if e is None}
        assert {o.key.hex() for o in outs} == server_keys
        assert len(server_keys) == 6


def test_garbage_magic_closes_connection(secret_for):
    with LiveServer(secret_for("toy-16"), "dhwe") as live:
        with socket.create_connection(live.server.address, timeout=5) as sock:
            sock.sendall(b"JUNKJUNKJUNKJUNKJUNK")
            _, err = live.wait()
            assert isinstance(err, WireFormatError)
            sock.settimeout(5)
            data = b""
            while chunk := sock.recv(4096):
                data += chunk
            assert data.startswith(wire.MAGIC)  # the init frame, then EOF


def test_client_rejects_unexpected_first_frame(secret_for):
    sp = secret_for("toy-16")
    a, b = socket.socketpair()
    with a, b:
        a.sendall(wire.encode_message(sp.params))
        with pytest.raises(ProtocolAbort):
            net.run_bob(net.Channel(b), make_rng(3))


def test_channel_reassembles_byte_by_byte(secret_for):
    sp = secret_for("toy-16")
    data = wire.encode_message(sp.params) * 2
    a, b = socket.socketpair()
    with a, b:
        def trickle():
            for i in range(len(data)):
                a.send(data[i : i + 1])

        t = threading.Thread(target=trickle)
        t.start()
        chan = net.Channel(b)
        assert chan.recv() == sp.params and chan.recv() == sp.params
        t.join()


def test_parse_address():
    assert net.parse_address("127.0.0.1:80") == ("127.0.0.1", 80)
    assert net.parse_address("[::1]:9") == ("::1", 9)
    with pytest.raises(ValueError):
        net.parse_address("localhost")


# -- CLI ---------------------------------------------------------------------------------

def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_selftest(capsys):
    code, out, _ = run_cli(capsys, "selftest", "--preset", "toy-16")
    assert code == 0
    lines = out.splitlines()
    assert [ln.split()[0] for ln in lines] == ["dhwe", "rsar"]
    for ln in lines:
        parts = ln.split()
        assert parts[2] == parts[4] and parts[-1] == "match"


def test_seed_requires_insecure_flag(capsys):
    code, _, err = run_cli(capsys, "selftest", "--seed", "1")
    assert code == 2 and "--insecure-deterministic" in err
    assert run_cli(capsys, "selftest", "--seed", "1", "--insecure-deterministic")[0] == 0


def test_deterministic_mode_is_reproducible(capsys):
    argv = ("lab", "dlp-demo", "--n", "8", "--seed", "5", "--insecure-deterministic")
    first = run_cli(capsys, *argv)
    assert first[0] == 0
    assert run_cli(capsys, *argv)[1] == first[1]
    lines = dict(ln.split(" ", 1) for ln in first[1].splitlines() if ln.startswith(("planted", "recovered")))
    assert lines["recovered"].split()[0] == lines["planted"]


def test_usage_errors(capsys, tmp_path):
    assert run_cli(capsys, "nonsense")[0] == 2
    assert run_cli(capsys, "params", "gen", "--n", "8", "--l", "3", "--secret-out", str(tmp_path / "s"))[0] == 2
    assert run_cli(capsys, "params", "gen", "--secret-out", str(tmp_path / "s"))[0] == 2


@pytest.mark.parametrize("protocol", ["dhwe", "rsar"])
def test_file_handshake(protocol, capsys, tmp_path):
    p = lambda name: str(tmp_path / name)
    assert run_cli(capsys, "params", "gen", "--preset", "toy-16", "--secret-out", p("s.json"),
                   "--out", p("pub.bin"))[0] == 0
    assert stat.S_IMODE(os.stat(p("s.json")).st_mode) == 0o600
    assert isinstance(wire.decode_message(open(p("pub.bin"), "rb").read()), cli.P.SystemParams)
    assert run_cli(capsys, protocol, "init", "--secret", p("s.json"), "--out", p("i.bin"),
                   "--state", p("st.json"))[0] == 0
    assert stat.S_IMODE(os.stat(p("st.json")).st_mode) == 0o600
    code, bob_out, _ = run_cli(capsys, protocol, "respond", "--in", p("i.bin"), "--out", p("r.bin"))
    assert code == 0
    code, alice_out, _ = run_cli(capsys, protocol, "finish", "--state", p("st.json"), "--in", p("r.bin"))
    assert code == 0 and alice_out == bob_out and alice_out.startswith("key ")


def test_params_gen_custom_polys(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "params", "gen", "--n", "9", "--l", "2", "--polys", "x^4+x+1,x^3+x+1",
                           "--secret-out", str(tmp_path / "s.json"))
    assert code == 0 and "r=105" in out
    doc = json.loads((tmp_path / "s.json").read_text())
    assert doc["n"] == 9 and len(doc["F"]) == 9


def test_protocol_abort_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"XXXX" + bytes(40))
    code, _, err = run_cli(capsys, "dhwe", "respond", "--in", str(bad), "--out", str(tmp_path / "o"))
    assert code == 1 and "WireFormatError" in err


def test_lab_commands(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "lab", "distinguish", "--trials", "50", "--csv", str(tmp_path / "d.csv"))
    assert code == 0 and len(out.splitlines()) == 2
    assert (tmp_path / "d.csv").read_text().startswith("name,")
    code, out, _ = run_cli(capsys, "lab", "tail", "--n", "6", "--trials", "50")
    assert code == 0 and json.loads(out)["mismatches"] == 0
    code, out, _ = run_cli(capsys, "lab", "scaling", "--presets", "toy-8", "--trials", "3")
    assert code == 0 and json.loads(out)["preset"] == "toy-8"


def _spawn(*argv):
    return subprocess.Popen([sys.executable, "-m", "noisykex.cli", *argv], stdout=subprocess.PIPE,
                            stderr=subprocess.PIPE, text=True)


@pytest.mark.parametrize("protocol", ["dhwe", "rsar"])
def test_serve_connect_processes(protocol):
    server = _spawn("serve", "--protocol", protocol, "--preset", "toy-16", "--once", "--confirm")
    try:
        banner = server.stdout.readline()
        assert banner.startswith("listening"), banner + server.stderr.read()
        address = banner.split()[1]
        client = subprocess.run([sys.executable, "-m", "noisykex.cli", "connect", address, "--confirm"],
                                capture_output=True, text=True, timeout=60)
        assert client.returncode == 0, client.stderr
        server_out, _ = server.communicate(timeout=60)
    finally:
        server.kill()
    client_key = next(ln for ln in client.stdout.splitlines() if ln.startswith("key "))
    assert server_out.strip().splitlines()[-1] == client_key
    assert "confirmed" in client.stdout
