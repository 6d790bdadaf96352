"""Helpers for loading Semantic Code Graph records in a notebook.

    scg_files = scg.read_scg("my-project")
    G = scg.create_graph(scg_files)
    nodes_df = scg.create_nodes_df(scg_files)

Records are read from ``<workspace>/.semanticgraphs``. Both the binary
``.semanticgraphdb`` files and the ``.json`` variant are understood.
"""

import json
import os
import struct

__all__ = ["Record", "ScgFiles", "read_scg", "read_record", "create_graph", "create_nodes_df"]

DATA_DIR = ".semanticgraphs"
BINARY_EXT = ".semanticgraphdb"
JSON_EXT = ".json"


class Record:
    """Nodes and edges stored for one source file."""

    def __init__(self, project_name, file_uri, nodes, edges):
        self.project_name = project_name
        self.file_uri = file_uri
        self.nodes = nodes
        self.edges = edges

    def __repr__(self):
        return "Record(%r, %d nodes, %d edges)" % (self.file_uri, len(self.nodes), len(self.edges))


class ScgFiles(list):
    """The records of one workspace, in path order."""

    @property
    def project_name(self):
        return next((r.project_name for r in self if r.project_name), "")


class _Reader:
    def __init__(self, buf, path):
        self.buf = buf
        self.pos = 0
        self.path = path

    def fail(self, msg):
        raise ValueError("%s: malformed record at byte %d: %s" % (self.path, self.pos, msg))

    def take(self, n):
        if len(self.buf) - self.pos < n:
            self.fail("unexpected end of data")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self):
        return self.take(1)[0]

    def u16(self):
        return struct.unpack("<H", self.take(2))[0]

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def str(self):
        return self.take(self.u32()).decode("utf-8")

    def location(self):
        marker = self.u8()
        if marker == 0:
            return None
        if marker != 1:
            self.fail("bad location marker")
        a, b, c, d = struct.unpack("<IIII", self.take(16))
        return {"startLine": a, "startCol": b, "endLine": c, "endCol": d}


def _decode_binary(buf, path):
    r = _Reader(buf, path)
    if r.take(4) != b"SCGB":
        r.fail("bad magic")
    if r.u16() != 1:
        r.fail("unsupported version")
    r.u16()
    project, file_uri, nodes, edges = "", "", [], []
    first = True
    while r.pos < len(buf):
        size = r.u32()
        end = r.pos + size
        tag = r.u8()
        if first and tag != 1:
            r.fail("missing header")
        if tag == 1:
            project, file_uri = r.str(), r.str()
        elif tag == 2:
            node = {
                "id": r.str(),
                "kind": r.str(),
                "displayName": r.str(),
                "packageName": r.str(),
                "fileUri": r.str(),
                "location": r.location(),
                "loc": r.u32(),
            }
            node["properties"] = {r.str(): r.str() for _ in range(r.u32())}
            nodes.append(node)
        elif tag == 3:
            edges.append({"from": r.str(), "to": r.str(), "type": r.str(), "location": r.location()})
        if r.pos != end:
            r.fail("record length mismatch")
        first = False
    return Record(project, file_uri, nodes, edges)


def _decode_json(text, path):
    doc = json.loads(text)
    if doc.get("format") != "scg-json":
        raise ValueError("%s: not an SCG JSON record" % path)
    nodes = []
    for n in doc["nodes"]:
        n = dict(n)
        n.setdefault("location", None)
        n.setdefault("properties", {})
        nodes.append(n)
    edges = [dict(e, location=e.get("location")) for e in doc["edges"]]
    return Record(doc["projectName"], doc["fileUri"], nodes, edges)


def read_record(path):
    """Reads one record file; the format follows from the extension."""
    with open(path, "rb") as f:
        data = f.read()
    if path.endswith(JSON_EXT):
        return _decode_json(data.decode("utf-8"), path)
    return _decode_binary(data, path)


def read_scg(workspace):
    """Reads every record under ``<workspace>/.semanticgraphs``."""
    root = os.path.join(workspace, DATA_DIR)
    if not os.path.isdir(root):
        raise FileNotFoundError(
            "no SCG data in %s; run `scg-cli generate -l java <workspace>` first" % workspace
        )
    paths = []
    for d, dirs, files in os.walk(root):
        dirs.sort()
        for name in files:
            if name.endswith(BINARY_EXT) or name.endswith(JSON_EXT):
                paths.append(os.path.join(d, name))
    return ScgFiles(read_record(p) for p in sorted(paths))


def _merged(scg_files):
    # A located node wins over stub copies of the same id.
    nodes = {}
    for rec in scg_files:
        for n in rec.nodes:
            old = nodes.get(n["id"])
            if old is None or (old["location"] is None and n["location"] is not None):
                nodes[n["id"]] = n
    edges = {}
    for rec in scg_files:
        for e in rec.edges:
            edges.setdefault((e["from"], e["to"], e["type"]), e)
    return nodes, edges


def create_graph(scg_files):
    """A networkx MultiDiGraph; edges carry ``type``, nodes their attributes."""
    import networkx as nx

    nodes, edges = _merged(scg_files)
    G = nx.MultiDiGraph()
    for nid in sorted(nodes):
        n = nodes[nid]
        G.add_node(
            nid,
            kind=n["kind"],
            displayName=n["displayName"],
            package=n["packageName"],
            file=n["fileUri"],
            loc=n["loc"],
        )
    for key in sorted(edges):
        G.add_edge(key[0], key[1], key=key[2], type=key[2])
    return G


def create_nodes_df(scg_files):
    """One row per node: id, kind, displayName, package, file, loc."""
    import pandas as pd

    nodes, _ = _merged(scg_files)
    rows = [
        {
            "id": n["id"],
            "kind": n["kind"],
            "displayName": n["displayName"],
            "package": n["packageName"],
            "file": n["fileUri"],
            "loc": n["loc"],
        }
        for _, n in sorted(nodes.items())
    ]
    return pd.DataFrame(rows, columns=["id", "kind", "displayName", "package", "file", "loc"])
