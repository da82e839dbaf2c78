"""Boot the whole platform in one process on loopback ports.

Topology mirrors the deployed layout: one shared document store, the
compute slot service and the training orchestrator on internal loopback
RPC, and the public API in front. The orchestrator reaches compute slots
over HTTP exactly as it would across containers.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from agrifed.httpkit import HttpServerHandle, serve
from agrifed.node.client import HttpNodeClient
from agrifed.node.http import node_http_service
from agrifed.node.service import FarmerNode
from agrifed.paramserver.client import HttpParamClient
from agrifed.paramserver.http import param_http_service
from agrifed.paramserver.service import ParamServer, ParamServerConfig
from agrifed.server.config import AppConfig
from agrifed.server.http import api_http_service
from agrifed.server.service import AppService
from agrifed.store.catalog import Catalog
from agrifed.store.db import DocumentStore


@dataclass
class Stack:
    catalog: Catalog
    node: FarmerNode
    param: ParamServer
    app: AppService
    node_http: HttpServerHandle
    param_http: HttpServerHandle
    app_http: HttpServerHandle

    @property
    def base_url(self) -> str:
        return self.app_http.base_url

    def stop(self) -> None:
        self.param.stop()
        for handle in (self.app_http, self.param_http, self.node_http):
            handle.stop()


def launch_stack(
    store_path: str,
    config: AppConfig | None = None,
    host: str = "127.0.0.1",
    app_port: int = 0,
    node_port: int = 0,
    param_port: int = 0,
) -> Stack:
    config = config or AppConfig()
    config.store_path = store_path
    if config.capability_secret == "dev-capability-secret":
        config.capability_secret = secrets.token_hex(16)

    catalog = Catalog(DocumentStore(store_path))

    node = FarmerNode(catalog, config.capability_secret)
    node_http = serve(node_http_service(node), host=host, port=node_port)
    config.node_url = node_http.base_url

    param = ParamServer(
        catalog,
        HttpNodeClient(node_http.base_url),
        ParamServerConfig(
            capability_secret=config.capability_secret,
            capability_ttl_seconds=config.capability_ttl_seconds,
        ),
    )
    param.start()
    param_http = serve(param_http_service(param), host=host, port=param_port)
    config.param_url = param_http.base_url

    app = AppService(
        catalog,
        HttpNodeClient(node_http.base_url),
        HttpParamClient(param_http.base_url),
        config,
    )
    app_http = serve(api_http_service(app), host=host, port=app_port)

    return Stack(
        catalog=catalog,
        node=node,
        param=param,
        app=app,
        node_http=node_http,
        param_http=param_http,
        app_http=app_http,
    )
