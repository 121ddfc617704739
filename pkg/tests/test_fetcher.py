import io
import threading
import zipfile

import pytest

from scratchlint.fetcher import (
    USER_AGENT,
    Fetcher,
    MalformedId,
    NetworkError,
    NotADirectory,
    NotFound,
    ProjectSource,
    SourceKind,
    read_id_list,
    scan_folder,
)


def make(fake, tmp_path, **kw):
    kw.setdefault("backoff", 0.01)
    return Fetcher(tmp_path / "cache", fake.api_url, fake.projects_url, **kw)


def test_token_flow_and_cache(fake_scratch, tmp_path, level_demo_text):
    fetcher = make(fake_scratch, tmp_path)
    path = fetcher.fetch(101)
    assert path.read_text(encoding="utf-8") == level_demo_text
    assert [p for p, _ in fake_scratch.requests] == ["/api/101", "/projects/101"]
    assert all(agent == USER_AGENT for _, agent in fake_scratch.requests)
    assert fetcher.fetch(101) == path
    assert len(fake_scratch.requests) == 2
    assert not list(path.parent.glob("*.part"))


def test_not_found(fake_scratch, tmp_path):
    with pytest.raises(NotFound):
        make(fake_scratch, tmp_path).fetch(999)
    assert len(fake_scratch.requests) == 1


def test_retries_then_succeeds(fake_scratch, tmp_path):
    fake_scratch.failures["/api/101"] = 2
    assert make(fake_scratch, tmp_path, retries=3).fetch(101).exists()


def test_gives_up_after_retries(fake_scratch, tmp_path):
    fake_scratch.failures["/api/101"] = 5
    with pytest.raises(NetworkError):
        make(fake_scratch, tmp_path, retries=2).fetch(101)
    assert len(fake_scratch.requests) == 3


def test_zipped_content_is_unpacked(fake_scratch, tmp_path, level_demo_text):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as z:
        z.writestr("project.json", level_demo_text)
    fake_scratch.projects["202"] = buf.getvalue()
    assert make(fake_scratch, tmp_path).fetch(202).read_text(encoding="utf-8") == level_demo_text


def test_fetch_many_keeps_order(fake_scratch, tmp_path):
    results = make(fake_scratch, tmp_path).fetch_many([999, 101, 998], jobs=3)
    assert isinstance(results[0], NotFound)
    assert results[1].name == "101.json"
    assert isinstance(results[2], NotFound)


def test_concurrent_fetches_of_one_id(fake_scratch, tmp_path, level_demo_text):
    fetcher = make(fake_scratch, tmp_path)
    out = []
    threads = [threading.Thread(target=lambda: out.append(fetcher.fetch(101))) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(out)) == 1
    assert out[0].read_text(encoding="utf-8") == level_demo_text


def test_read_id_list(tmp_path):
    listing = tmp_path / "ids.txt"
    listing.write_text("# ids\n101\n\n  202  \n")
    assert [s.project_id for s in read_id_list(listing)] == [101, 202]
    listing.write_text("101\nabc\n")
    with pytest.raises(MalformedId) as info:
        read_id_list(listing)
    assert info.value.line == 2
    listing.write_text("0\n")
    with pytest.raises(MalformedId):
        read_id_list(listing)


def test_scan_folder(tmp_path):
    for name in ("b.sb3", "a.json", "c.txt", "D.SB3"):
        (tmp_path / name).write_text("x")
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "e.json").write_text("x")
    found = scan_folder(tmp_path)
    assert [s.resolved_name for s in found] == ["D", "a", "b"]
    assert [s.kind for s in found] == [SourceKind.LOCAL_SB3, SourceKind.LOCAL_JSON, SourceKind.LOCAL_SB3]
    with pytest.raises(NotADirectory):
        scan_folder(tmp_path / "a.json")


def test_remote_source_validation():
    assert ProjectSource.remote(5).project_id == 5
    for bad in (0, -1, True, "5"):
        with pytest.raises(ValueError):
            ProjectSource.remote(bad)
