"""Command line interface: serve the gateway, ingest files, manage users.

Offline ingest (``geolink ingest ...``) writes through an embedded backend
directly into the data directory; run it while the server is stopped. At
runtime the POST /ingest/* endpoints do the same job over HTTP.
"""

from __future__ import annotations

import argparse
import getpass
import sys
from pathlib import Path

from geolink.errors import GeolinkError
from geolink.server.auth import RIGHTS, AccountStore, LoginRateLimiter, TokenService, load_or_create_secret
from geolink.server.backend import Backend
from geolink.server.config import ServerConfig
from geolink.server.gateway import Gateway
from geolink.server.httpd import GatewayHTTPServer


def build_backend(config: ServerConfig) -> Backend:
    if config.mode == "multiproc":
        return Backend.multiprocess(config)
    return Backend.embedded(config)


def build_gateway(config: ServerConfig, backend: Backend) -> Gateway:
    secret = load_or_create_secret(config.secret_path)
    return Gateway(
        backend=backend,
        accounts=AccountStore(config.account_store),
        tokens=TokenService(secret, lifetime_s=config.token_lifetime_s),
        rate_limiter=LoginRateLimiter(
            window_s=config.rate_limit_window_s,
            max_attempts=config.rate_limit_max_attempts,
        ),
    )


def cmd_serve(args) -> int:
    config = ServerConfig.load(args.config)
    backend = build_backend(config)
    try:
        gateway = build_gateway(config, backend)
        server = GatewayHTTPServer(gateway, config.listen_host, config.listen_port)
        mode = config.mode
        print(f"geolink gateway listening on {server.url} ({mode} mode)")
        if backend.worker_ports():
            ports = ", ".join(f"{m}:{p}" for m, p in sorted(backend.worker_ports().items()))
            print(f"workers on loopback: {ports}")
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            print("shutting down")
            server.shutdown()
        return 0
    finally:
        backend.close()


def cmd_ingest(args) -> int:
    config = ServerConfig.load(args.config)
    backend = Backend.embedded(config)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
        if args.kind == "document":
            report = backend.ingest_document_text(text)
            print(
                f"ingested document {report.document_id}: {report.sentences} sentences, "
                f"{report.entities} entities, statements {report.statements}"
            )
        elif args.kind == "areas":
            result = backend.ingest_areas_text(text)
            print(
                f"ingested {result['areas']} areas "
                f"({result['overlapEdges']} overlap edges, {result['associations']} sensor links)"
            )
        elif args.kind == "stations":
            result = backend.ingest_stations_text(text)
            print(f"ingested {result['stations']} stations ({result['associations']} sensor links)")
        else:  # readings
            report = backend.ingest_readings_text(text)
            print(f"accepted {report.accepted} readings, rejected {len(report.rejected)}")
            for line, reason in report.rejected:
                print(f"  line {line}: {reason}", file=sys.stderr)
        return 0
    finally:
        backend.close()


def _parse_rights(raw: str) -> list[str]:
    rights = [r.strip() for r in raw.split(",") if r.strip()]
    unknown = set(rights) - set(RIGHTS)
    if unknown:
        raise GeolinkError(f"unknown rights {sorted(unknown)}; valid: {', '.join(RIGHTS)}")
    return rights


def cmd_user(args) -> int:
    config = ServerConfig.load(args.config)
    accounts = AccountStore(config.account_store)
    rights = _parse_rights(args.rights)
    if args.action == "add":
        password = args.password or getpass.getpass(f"password for {args.username}: ")
        accounts.add(args.username, password, rights)
        print(f"added user {args.username} with rights {sorted(rights)}")
    else:  # rights
        accounts.set_rights(args.username, rights)
        print(f"set rights of {args.username} to {sorted(rights)}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="geolink", description="geospatial knowledge-linkage service")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the gateway")
    p_serve.add_argument("--config", required=True)
    p_serve.set_defaults(fn=cmd_serve)

    p_ingest = sub.add_parser("ingest", help="ingest a file into the data directory")
    p_ingest.add_argument("kind", choices=["document", "areas", "stations", "readings"])
    p_ingest.add_argument("file")
    p_ingest.add_argument("--config", required=True)
    p_ingest.set_defaults(fn=cmd_ingest)

    p_user = sub.add_parser("user", help="manage accounts")
    user_sub = p_user.add_subparsers(dest="action", required=True)
    for action in ("add", "rights"):
        p_action = user_sub.add_parser(action)
        p_action.add_argument("username")
        p_action.add_argument("--rights", required=True, help="comma-separated rights")
        p_action.add_argument("--config", required=True)
        if action == "add":
            p_action.add_argument("--password", help="omit to prompt")
        p_action.set_defaults(fn=cmd_user, action=action)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GeolinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
