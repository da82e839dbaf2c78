"""Public JSON-over-HTTP API, versioned under /api/v1.

Every endpoint except the auth pair requires a bearer session token.
Dataset upload is multipart/form-data with a ``name`` field and a ``file``
part; everything else is JSON.
"""

from __future__ import annotations

from email import message_from_bytes, policy

from agrifed.errors import MissingField, NotCsv
from agrifed.httpkit import JsonHttpService, Request
from agrifed.server.service import AppService


def parse_multipart(body: bytes, content_type: str) -> dict[str, tuple[str | None, bytes]]:
    """name -> (filename, payload) for each part."""
    head = f"Content-Type: {content_type}\r\nMIME-Version: 1.0\r\n\r\n".encode("ascii")
    msg = message_from_bytes(head + body, policy=policy.default)
    if not msg.is_multipart():
        raise MissingField("expected multipart/form-data")
    fields = {}
    for part in msg.iter_parts():
        name = part.get_param("name", header="content-disposition")
        if name is None:
            continue
        payload = part.get_payload(decode=True)
        fields[str(name)] = (part.get_filename(), payload if payload is not None else b"")
    return fields


def api_http_service(app: AppService) -> JsonHttpService:
    service = JsonHttpService("app-server")

    def auth(req: Request) -> str:
        return app.authenticate(req.bearer_token())

    # -- auth --------------------------------------------------------------

    @service.route("POST", "/api/v1/auth/register")
    def register(req: Request):
        doc = req.json()
        return 200, app.register(doc.get("username", ""), doc.get("credential", ""))

    @service.route("POST", "/api/v1/auth/login")
    def login(req: Request):
        doc = req.json()
        if not doc.get("username"):
            raise MissingField("username is required", field="username")
        return 200, app.login(doc["username"], doc.get("credential", ""))

    # -- datasets -------------------------------------------------------------

    @service.route("GET", "/api/v1/datasets")
    def list_datasets(req: Request):
        return 200, {"datasets": app.list_datasets(auth(req))}

    @service.route("POST", "/api/v1/datasets")
    def upload_dataset(req: Request):
        user = auth(req)
        content_type = req.headers.get("content-type", "")
        if not content_type.startswith("multipart/form-data"):
            raise NotCsv("upload must be multipart/form-data with a CSV file part")
        fields = parse_multipart(req.body, content_type)
        name = fields.get("name", (None, b""))[1].decode("utf-8", "replace")
        if "file" not in fields:
            raise MissingField("file part is required", field="file")
        return 200, app.upload_dataset(user, name, fields["file"][1])

    @service.route("GET", "/api/v1/datasets/{dataset_id}")
    def get_dataset(req: Request):
        return 200, app.get_dataset(auth(req), req.params["dataset_id"])

    @service.route("DELETE", "/api/v1/datasets/{dataset_id}")
    def delete_dataset(req: Request):
        return 200, app.delete_dataset(auth(req), req.params["dataset_id"])

    # -- similar farmers ------------------------------------------------------------

    @service.route("POST", "/api/v1/similar")
    def similar(req: Request):
        user = auth(req)
        doc = req.json()
        if not doc.get("dataset_id"):
            raise MissingField("dataset_id is required", field="dataset_id")
        return 200, app.find_similar(
            user,
            doc["dataset_id"],
            epsilon=doc.get("epsilon"),
            seed=doc.get("seed"),
        )

    # -- chat ---------------------------------------------------------------------------

    @service.route("GET", "/api/v1/chat/{peer}")
    def conversation(req: Request):
        user = auth(req)
        return 200, {
            "messages": app.fetch_conversation(user, req.params["peer"], req.query.get("since"))
        }

    @service.route("POST", "/api/v1/chat/{peer}")
    def send_message(req: Request):
        user = auth(req)
        return 200, app.send_message(user, req.params["peer"], req.json().get("body", ""))

    # -- jobs ----------------------------------------------------------------------------

    @service.route("POST", "/api/v1/jobs")
    def submit_job(req: Request):
        return 200, app.submit_training(auth(req), req.json())

    @service.route("GET", "/api/v1/jobs/{job_id}")
    def job_status(req: Request):
        return 200, app.job_status(auth(req), req.params["job_id"])

    @service.route("POST", "/api/v1/jobs/{job_id}/consent")
    def consent(req: Request):
        doc = req.json()
        return 200, app.consent(auth(req), req.params["job_id"], bool(doc.get("accept")))

    # -- model repository ---------------------------------------------------------------------

    @service.route("GET", "/api/v1/models")
    def list_models(req: Request):
        return 200, {"models": app.list_models(auth(req))}

    @service.route("GET", "/api/v1/models/{model_id}/info")
    def model_info(req: Request):
        return 200, app.model_info(auth(req), req.params["model_id"])

    @service.route("POST", "/api/v1/models/{model_id}/predict")
    def predict(req: Request):
        doc = req.json()
        return 200, app.playground_predict(auth(req), req.params["model_id"], doc.get("rows"))

    @service.route("GET", "/api/v1/models/{model_id}/risk")
    def model_risk(req: Request):
        return 200, app.model_risk(auth(req), req.params["model_id"])

    @service.route("GET", "/api/v1/models/{model_id}/logs")
    def model_logs(req: Request):
        return 200, app.model_logs(auth(req), req.params["model_id"])

    return service
