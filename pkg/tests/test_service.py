import pytest
from fastapi.testclient import TestClient
from PIL import Image

from cbir.service import create_app
from cbir.store import ingest_dataset
from cbir.svm.kernels import KernelSpec
from cbir.svm.multiclass import train_one_vs_one


@pytest.fixture(scope="module")
def served(small_corpus):
    index = ingest_dataset(small_corpus)
    model = train_one_vs_one(index, KernelSpec("gaussian"), C=10.0, seed=1)
    app = create_app(index, model, upload_cap=512 * 1024)
    return {"index": index, "client": TestClient(app)}


@pytest.fixture(scope="module")
def bare_client(small_corpus):
    return TestClient(create_app(ingest_dataset(small_corpus), model=None))


def test_images_pagination(served):
    client = served["client"]
    pages = []
    for page in range(5):
        body = client.get("/api/images", params={"page": page, "page_size": 5}).json()
        assert body["total"] == 20
        pages.append(body["items"])
    assert [len(p) for p in pages] == [5, 5, 5, 5, 0]  # 20/5 -> 4 pages, then empty
    ids = [item["id"] for page in pages for item in page]
    assert ids == list(range(20))  # stable ordering by id


def test_query_by_id_knn_self_first(served):
    body = served["client"].get(
        "/api/query", params={"id": 3, "mode": "knn", "k": 5}
    ).json()
    assert body["mode"] == "knn"
    assert body["predicted_class"] is None
    assert len(body["results"]) <= 5
    assert body["results"][0]["id"] == 3
    assert body["results"][0]["score"] == 0.0
    assert body["results"][0]["thumbnail_url"] == "/thumb/3"


def test_query_by_id_svm_mode(served):
    body = served["client"].get(
        "/api/query", params={"id": 0, "mode": "svm", "k": 4}
    ).json()
    assert body["predicted_class"] is not None
    labels = {r["label"] for r in body["results"]}
    assert labels == {body["predicted_class"]}


def test_unknown_id_is_404(served):
    assert served["client"].get("/api/query", params={"id": 999}).status_code == 404
    assert served["client"].get("/thumb/999").status_code == 404


def test_svm_without_model_is_409(bare_client):
    r = bare_client.get("/api/query", params={"id": 0, "mode": "svm"})
    assert r.status_code == 409


def test_upload_copy_of_indexed_image(served):
    path = served["index"].paths[0]
    with open(path, "rb") as fh:
        r = served["client"].post(
            "/api/query?mode=knn&k=3",
            files={"image": ("q.png", fh.read(), "image/png")},
        )
    assert r.status_code == 200
    top = r.json()["results"][0]
    assert top["id"] == 0
    assert abs(top["score"]) <= 1e-9


def test_upload_corrupt_bytes_is_400(served):
    r = served["client"].post(
        "/api/query", files={"image": ("junk.png", b"not an image", "image/png")}
    )
    assert r.status_code == 400


def test_upload_oversize_is_413(served):
    blob = b"\x00" * (600 * 1024)  # above the 512 KiB cap of this fixture
    r = served["client"].post(
        "/api/query", files={"image": ("big.png", blob, "image/png")}
    )
    assert r.status_code == 413


def test_thumbnail_shape_and_type(served):
    import io

    r = served["client"].get("/thumb/0")
    assert r.status_code == 200
    assert r.headers["content-type"] == "image/jpeg"
    thumb = Image.open(io.BytesIO(r.content))
    assert max(thumb.size) <= 128


def test_identical_requests_identical_bodies(served):
    a = served["client"].get("/api/query", params={"id": 2, "k": 4}).json()
    b = served["client"].get("/api/query", params={"id": 2, "k": 4}).json()
    a.pop("timing_ms")
    b.pop("timing_ms")
    assert a == b
