"""Worker process entrypoint: hosts one store on a loopback socket.

Run as ``python -m geolink.server.worker --module graph --data-dir D``.
Prints ``READY <port>`` once the socket is bound; the gateway reads that
line to learn the ephemeral port. Workers always bind 127.0.0.1, so the
gateway stays the only externally reachable listener.
"""

from __future__ import annotations

import argparse
import sys

from geolink.graph.store import PropertyGraph
from geolink.index.inverted import SentenceIndex
from geolink.sensors.feed import SensorFeed
from geolink.server.geodata import GeoDataStore
from geolink.server.rpc import WorkerServer
from geolink.textpipe.store import DocumentStore


def build_store(module: str, data_dir: str, sensor_max_age_s: float):
    if module == "graph":
        return PropertyGraph(wal_path=f"{data_dir}/graph.wal")
    if module == "index":
        return SentenceIndex()
    if module == "documents":
        return DocumentStore(directory=f"{data_dir}/documents")
    if module == "sensors":
        return SensorFeed(store_path=f"{data_dir}/readings.csv", max_age_s=sensor_max_age_s)
    if module == "geodata":
        return GeoDataStore(
            areas_path=f"{data_dir}/areas.jsonl",
            stations_path=f"{data_dir}/stations.jsonl",
        )
    raise SystemExit(f"unknown worker module {module!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="geolink store worker")
    parser.add_argument("--module", required=True,
                        choices=["graph", "index", "documents", "sensors", "geodata"])
    parser.add_argument("--data-dir", required=True)
    parser.add_argument("--port", type=int, default=0)
    parser.add_argument("--sensor-max-age", type=float, default=24 * 3600.0)
    args = parser.parse_args(argv)

    store = build_store(args.module, args.data_dir, args.sensor_max_age)
    server = WorkerServer(store, args.module, port=args.port)
    print(f"READY {server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
