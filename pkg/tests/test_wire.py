import io
import json
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from cryptoarena.cryptomath import NullRng, SeededRng
from cryptoarena.wire import VERSION, CryptoMath, canonical_json, cli_eval
from cryptoarena.wire.http import make_server, parse_bind

from conftest import FIXTURES

ERROR_CODES = {"unknown_op", "bad_args", "bad_hex", "bad_length", "not_invertible",
               "point_at_infinity", "moduli_not_coprime", "low_order_point", "internal"}

# every operation named in the calculator's published op list
APPENDIX_OPS = {
    "ping", "schema", "help", "sha256", "sha512", "sha256_chain", "hmac_sha256", "hkdf_sha256",
    "aes_gcm_encrypt", "x25519_keygen", "x25519_dh", "ed25519_keygen", "ed25519_sign", "ed25519_verify",
    "secp256k1_keygen", "secp256k1_add", "secp256k1_scalar_mul", "secp256k1_pedersen_commit",
    "secp256k1_schnorr_sign", "secp256k1_schnorr_verify", "zk_age_over_21_prove", "zk_age_over_21_verify",
    "modexp", "invmod", "addmod", "mulmod", "gcd", "crt", "merkle_parent_sha256",
    "merkle_verify_path_sha256", "bls_keygen", "g1_hash_to_curve", "pairing_product_check", "rsa_keygen",
}


@pytest.fixture(scope="module")
def svc():
    return CryptoMath(rng=SeededRng(7))


@pytest.fixture(scope="module")
def server():
    srv = make_server("127.0.0.1:0", CryptoMath(rng=SeededRng(7)))
    t = threading.Thread(target=srv.serve_forever, daemon=True)
    t.start()
    yield "http://%s:%d/" % srv.server_address[:2]
    srv.shutdown()
    srv.server_close()


def post(url, body: bytes):
    req = urllib.request.Request(url, data=body, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            return resp.status, resp.read().decode()
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read().decode()


def check_envelope(env, op):
    assert set(env) in ({"ok", "op", "result", "meta"}, {"ok", "op", "error", "meta"})
    assert env["op"] == op
    assert env["meta"]["version"] == VERSION
    assert env["ok"] == ("result" in env)
    if not env["ok"]:
        assert env["error"]["code"] in ERROR_CODES
        assert env["error"]["message"]


def test_ping(svc):
    env = svc.dispatch({"op": "ping", "args": {}})
    check_envelope(env, "ping")
    assert env["result"] == {"pong": "pong", "version": VERSION}


@pytest.mark.parametrize("request_, code", [
    ({"op": "nope", "args": {}}, "unknown_op"),
    ({"op": "sha256", "args": {"data": "0xzz"}}, "bad_hex"),
    ({"op": "sha256", "args": {"data": "61"}}, "bad_hex"),
    ({"op": "sha256", "args": {"data": "0x616"}}, "bad_hex"),
    ({"op": "x25519_dh", "args": {"sk": "0x01", "pk": "0x" + "09" + "00" * 31}}, "bad_length"),
    ({"op": "sha256", "args": {}}, "bad_args"),
    ({"op": "sha256", "args": {"data": "0x61", "extra": 1}}, "bad_args"),
    ({"op": "sha256", "args": {"data": 97}}, "bad_args"),
    ({"op": "sha256"}, "bad_args"),
    ({"op": "", "args": {}}, "bad_args"),
    ({"op": "modexp", "args": {"base": True, "exp": 1, "mod": 5}}, "bad_args"),
    ({"op": "invmod", "args": {"a": 6, "mod": 9}}, "not_invertible"),
    ({"op": "crt", "args": {"residues": [1, 1], "moduli": [4, 6]}}, "moduli_not_coprime"),
    ({"op": "x25519_dh", "args": {"sk": "0x" + "11" * 32, "pk": "0x" + "00" * 32}}, "low_order_point"),
])
def test_error_codes(svc, request_, code):
    env = svc.dispatch(request_)
    check_envelope(env, request_.get("op", ""))
    assert env["error"]["code"] == code


def test_non_object_request_is_enveloped(svc):
    env = svc.dispatch([1, 2])
    check_envelope(env, "")
    assert env["error"]["code"] == "bad_args"


def test_ops_cover_published_list(svc):
    assert set(svc.ops) == APPENDIX_OPS


def test_schema_set_equals_dispatch_set(svc):
    schema_ops = set()
    for op in svc.ops:
        env = svc.dispatch({"op": "schema", "args": {"op": op}})
        assert env["ok"], env
        schema_ops.add(env["result"]["op"])
    assert schema_ops == set(svc.ops)
    # anything outside the schema set is not dispatchable
    assert svc.dispatch({"op": "schema", "args": {"op": "sha1"}})["error"]["code"] == "unknown_op"
    assert svc.dispatch({"op": "sha1", "args": {"data": "0x"}})["error"]["code"] == "unknown_op"


def test_schema_is_stable(svc):
    a = canonical_json(svc.dispatch({"op": "schema", "args": {"op": "aes_gcm_encrypt"}}))
    b = canonical_json(svc.dispatch({"op": "schema", "args": {"op": "aes_gcm_encrypt"}}))
    assert a == b


def test_schema_sha256_and_crt(svc):
    sha = svc.dispatch({"op": "schema", "args": {"op": "sha256"}})["result"]
    assert set(sha["expected_args_schema"]) == {"data"}
    crt = svc.dispatch({"op": "schema", "args": {"op": "crt"}})["result"]
    assert crt["expected_args_schema"]["residues"]["type"] == "array<int>"
    assert crt["expected_args_schema"]["moduli"]["type"] == "array<int>"


def test_every_example_dispatches(svc):
    for op in svc.ops:
        schema = svc.dispatch({"op": "schema", "args": {"op": op}})["result"]
        assert set(schema["example_args"]) == set(schema["expected_args_schema"]), op
        env = svc.dispatch({"op": op, "args": schema["example_args"]})
        check_envelope(env, op)
        assert env["ok"], (op, env)


def test_keygen_examples_fail_under_null_rng():
    svc = CryptoMath(rng=NullRng())
    for op in svc.ops:
        example = svc.schema_of(op)["example_args"]
        env = svc.dispatch({"op": op, "args": example})
        if op.endswith("_keygen"):
            assert env["error"]["code"] == "internal", op
        else:
            assert env["ok"], op


def test_help(svc):
    for op in svc.ops:
        env = svc.dispatch({"op": "help", "args": {"op": op}})
        assert env["ok"] and env["result"]["usage"].strip(), op
    usage = svc.dispatch({"op": "help", "args": {"op": "hmac_sha256"}})["result"]["usage"]
    assert "key" in usage and "msg" in usage
    assert svc.dispatch({"op": "help", "args": {"op": "nope"}})["error"]["code"] == "unknown_op"


def test_int_args_accept_hex_strings(svc):
    a = svc.dispatch({"op": "modexp", "args": {"base": 4, "exp": 13, "mod": 497}})
    b = svc.dispatch({"op": "modexp", "args": {"base": "0x4", "exp": "0xd", "mod": "0x1f1"}})
    assert a["result"] == b["result"] == {"value_hex": "0x1bd"}


def test_rsa_small_keys_flagged(svc):
    env = svc.dispatch({"op": "rsa_keygen", "args": {"bits": 512}})
    assert env["ok"] and env["meta"]["insecure"] is True


def test_chain_cap_env(monkeypatch):
    monkeypatch.setenv("CRYPTOMATH_MAX_CHAIN_ITERS", "5")
    svc = CryptoMath()
    assert svc.dispatch({"op": "sha256_chain", "args": {"data": "0x61", "iters": 5}})["ok"]
    assert svc.dispatch({"op": "sha256_chain", "args": {"data": "0x61", "iters": 6}})["error"]["code"] == "bad_args"


def test_cli_eval_single_line_and_exit_codes(svc):
    out, err = io.StringIO(), io.StringIO()
    assert cli_eval('{"op":"ping","args":{}}', svc, out, err) == 0
    lines = out.getvalue().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["result"]["pong"] == "pong"

    out = io.StringIO()
    assert cli_eval('{"op":"nope","args":{}}', svc, out, err) == 0
    assert json.loads(out.getvalue())["ok"] is False

    out, err = io.StringIO(), io.StringIO()
    assert cli_eval("not json", svc, out, err) == 1
    assert out.getvalue() == ""
    assert json.loads(err.getvalue())["ok"] is False


def test_http_ping_and_garbage(server):
    status, body = post(server, b'{"op":"ping","args":{}}')
    assert status == 200 and json.loads(body)["result"]["pong"] == "pong"
    status, body = post(server, b"{garbage")
    assert status == 400 and json.loads(body)["ok"] is False
    status, body = post(server, b'{"op":"nope","args":{}}')
    assert status == 200 and json.loads(body)["error"]["code"] == "unknown_op"


def test_http_concurrent_requests(server, svc):
    payloads = [json.dumps({"op": "sha256", "args": {"data": "0x" + i.to_bytes(4, "big").hex()}}) for i in range(64)]
    serial = [svc.handle_text(p) for p in payloads]
    with ThreadPoolExecutor(64) as pool:
        results = list(pool.map(lambda p: post(server, p.encode()), payloads))
    assert [s for s, _ in results] == [200] * 64
    assert [b for _, b in results] == serial


def test_http_and_cli_identical_on_golden(server):
    lines = (FIXTURES / "wire_golden_requests.jsonl").read_text().splitlines()
    assert len(lines) == 20
    cli_svc = CryptoMath(rng=SeededRng(7))
    for line in lines:
        status, http_body = post(server, line.encode())
        assert status == 200
        out = io.StringIO()
        assert cli_eval(line, cli_svc, out, io.StringIO()) == 0
        assert out.getvalue() == http_body + "\n"
        check_envelope(json.loads(http_body), json.loads(line)["op"])


def test_parse_bind():
    assert parse_bind("127.0.0.1:8080") == ("127.0.0.1", 8080)
    for bad in ("8080", "host:", ":80", "host:99999", "host:http"):
        with pytest.raises(ValueError):
            parse_bind(bad)
