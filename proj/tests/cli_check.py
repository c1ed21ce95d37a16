"""CLI contract: exit codes, schema conformance, golden bytes, service payloads."""
import argparse
import json
import pathlib
import socket
import subprocess
import sys
import tempfile
import time
import urllib.error
import urllib.request

import jsonschema
import referencing

GOLDEN = [
    ("rank-circle200-disk", ["rank", "--body", "disk", "--target", "circle-200"]),
    ("play-goodcopy-rank-s1", ["play", "--pI", "goodcopy", "--pII", "rank", "--horizon", "30", "--seed", "1"]),
    ("play-random-enumerate-scatter", ["play", "--pI", "random", "--pII", "enumerate", "--target", "scatter-10",
                                       "--horizon", "20", "--seed", "7"]),
    ("minhull-square", ["minhull", "--body", "square", "--points", "[[0,0],[3,1]]"]),
    ("faces-square", ["faces", "--body", "square"]),
    ("target-scatter-s3", ["target", "--gen", "scatter-12", "--seed", "3"]),
    ("extract-depth2", ["extract", "--depth", "2", "--seed", "0"]),
]

failures = []


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


def run(binary, args, expect=0):
    p = subprocess.run([binary] + args, capture_output=True, text=True, timeout=600)
    check(p.returncode == expect, f"{' '.join(args)}: exit {p.returncode}, expected {expect}: {p.stderr.strip()}")
    return p


def registry(schemas):
    resources = []
    for path in schemas.glob("*.json"):
        doc = json.loads(path.read_text())
        resources.append((path.name, referencing.Resource.from_contents(doc)))
    return referencing.Registry().with_resources(resources)


def validate(reg, instance, ref, what):
    schema = {"$ref": ref}
    try:
        jsonschema.Draft7Validator(schema, registry=reg).validate(instance)
    except jsonschema.ValidationError as e:
        check(False, f"{what}: {e.message} at {list(e.absolute_path)}")


def http(method, url, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=120) as r:
            return r.status, json.loads(r.read())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read())


def service(binary, reg):
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    proc = subprocess.Popen([binary, "serve", "--port", str(port)], stderr=subprocess.PIPE)
    base = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            try:
                socket.create_connection(("127.0.0.1", port), timeout=0.2).close()
                break
            except OSError:
                time.sleep(0.1)
        code, s = http("POST", base + "/sessions",
                       {"body": "disk", "target": "circle-200", "humanSide": "I", "strategy": "rank", "seed": 3})
        check(code == 201, "create status")
        validate(reg, s, "session.json#/definitions/summary", "create")
        sid = s["id"]
        code, r = http("POST", f"{base}/sessions/{sid}/moves", {"center": [0, 0], "scale": 1.25})
        check(code == 200, "submit status")
        validate(reg, r, "session.json#/definitions/submitResponse", "submit")
        ii = r["machine"]
        code, p = http("POST", f"{base}/sessions/{sid}/preview", {"center": ii["center"], "scale": 0.01})
        validate(reg, p, "session.json#/definitions/previewResponse", "preview")
        code, e = http("POST", f"{base}/sessions/{sid}/moves", {"center": ii["center"], "scale": 0.01})
        check(code == 422, "illegal move status")
        validate(reg, e, "session.json#/definitions/error", "error")
        code, st = http("GET", f"{base}/sessions/{sid}?since=0")
        validate(reg, st, "session.json#/definitions/state", "state")
        code, ov = http("GET", f"{base}/sessions/{sid}/overlays?kinds=goodCopies,cones,ranks")
        check(code == 200, "overlays status")
        validate(reg, ov, "session.json#/definitions/overlays", "overlays")
        code, snap = http("GET", f"{base}/sessions/{sid}/snapshot")
        validate(reg, snap, "session.json#/definitions/snapshot", "snapshot")
        code, u = http("POST", f"{base}/sessions/{sid}/undo", {"toRevision": 0})
        validate(reg, u, "session.json#/definitions/summary", "undo")
        code, nf = http("GET", f"{base}/sessions/nope")
        check(code == 404, "unknown session status")
        validate(reg, nf, "session.json#/definitions/error", "not found")
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bin", required=True)
    ap.add_argument("--schemas", required=True)
    ap.add_argument("--golden", required=True)
    ap.add_argument("--freeze", action="store_true", help="rewrite the golden files")
    a = ap.parse_args()
    reg = registry(pathlib.Path(a.schemas))
    golden = pathlib.Path(a.golden)

    for name, args in GOLDEN:
        out = run(a.bin, args).stdout
        path = golden / (name + ".json")
        if a.freeze:
            path.write_text(out)
        else:
            check(path.exists() and path.read_text() == out, f"golden {name} differs")
        again = run(a.bin, args).stdout
        check(again == out, f"{name} not byte-stable across reruns")

    with tempfile.TemporaryDirectory() as tmp:
        t = pathlib.Path(tmp)
        body = json.loads(run(a.bin, ["body", "--gen", "square"]).stdout)
        validate(reg, body, "body.json", "body")
        (t / "square.json").write_text(json.dumps(body))
        run(a.bin, ["body", "--in", str(t / "square.json")])
        target = json.loads(run(a.bin, ["target", "--gen", "circle-200"]).stdout)
        validate(reg, target, "target.json", "target")
        (t / "circle200.json").write_text(json.dumps(target))
        disk = run(a.bin, ["body", "--gen", "disk"]).stdout
        (t / "disk.json").write_text(disk)
        r = run(a.bin, ["rank", "--target", str(t / "circle200.json"), "--body", str(t / "disk.json")])
        check(r.stdout == '{"rank":0,"fixpointSize":200}\n', f"rank example printed {r.stdout!r}")
        validate(reg, json.loads(r.stdout), "trace.json#/definitions/rankSummary", "rank summary")
        tr = run(a.bin, ["rank", "--target", "decorated-200", "--body", "disk", "--trace"]).stdout
        validate(reg, json.loads(tr), "trace.json", "trace")
        st = run(a.bin, ["derive", "--target", "scatter-6", "--seed", "1", "--body", "disk"]).stdout
        validate(reg, json.loads(st), "trace.json#/definitions/step", "step")
        cert = run(a.bin, ["derive", "--target", "circle-200", "--body", "disk", "--copy",
                           '{"center":[0,0],"scale":1}']).stdout
        validate(reg, json.loads(cert), "certificate.json", "certificate")
        rec = run(a.bin, ["play", "--pI", "random", "--pII", "enumerate", "--target", "scatter-10", "--horizon", "20",
                          "--seed", "7", "-o", str(t / "rec.json")])
        validate(reg, json.loads((t / "rec.json").read_text()), "runrecord.json", "run record")
        rp = json.loads(run(a.bin, ["replay", "--record", str(t / "rec.json")]).stdout)
        check(rp["bytesMatch"] and rp["outcomeMatches"], "replay mismatch")
        faces = json.loads(run(a.bin, ["faces", "--body", "cube"]).stdout)
        validate(reg, faces, "faces.json", "faces")
        thin = json.loads(run(a.bin, ["thin", "--target", "circle-64", "--mode", "both"]).stdout)
        validate(reg, thin, "colored.json#/definitions/thinning", "thinning")
        check(thin["verified"], "thinning result not verified")
        svg = run(a.bin, ["play", "--seed", "2", "--horizon", "5", "--format", "svg"]).stdout
        check(svg.startswith("<?xml") and "</svg>" in svg, "svg output")

        # Exit codes.
        (t / "bad.json").write_text('{"kind":"blob","dim":2}')
        e = run(a.bin, ["delta", "--body", str(t / "bad.json")], expect=2)
        check("/kind" in json.loads(e.stderr)["pointer"], "pointer to the offending field")
        (t / "broken.json").write_text('{"points": [[0,0], ')
        run(a.bin, ["rank", "--body", "disk", "--target", str(t / "broken.json")], expect=2)
        run(a.bin, ["play", "--horizon", "3"], expect=2)
        run(a.bin, ["target", "--gen", "scatter-10"], expect=2)
        run(a.bin, ["faces", "--body", "ngon-40"], expect=3)
        run(a.bin, ["body", "--gen", "ngon-x"], expect=2)

    service(a.bin, reg)
    if failures:
        print(f"{len(failures)} failure(s)")
        sys.exit(1)
    print("cli checks passed")


if __name__ == "__main__":
    main()
