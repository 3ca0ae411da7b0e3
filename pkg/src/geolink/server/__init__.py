"""Gateway: auth, routing, filtering, and the two backend topologies."""

from geolink.server.backend import Backend
from geolink.server.config import ServerConfig
from geolink.server.gateway import ApiRequest, Gateway
from geolink.server.httpd import GatewayHTTPServer

__all__ = ["Backend", "ServerConfig", "Gateway", "ApiRequest", "GatewayHTTPServer"]
