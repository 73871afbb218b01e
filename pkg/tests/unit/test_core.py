"""Unit tests for the data model: rasters, conditions, items, bundles, transcripts."""

from dataclasses import replace

import numpy as np
import pytest

from sscaudit.core.bundle import make_prompt_bundle
from sscaudit.core.condition import PROTOCOL_CONDITIONS, Condition
from sscaudit.core.errors import (
    DataValidationError,
    ItemValidationError,
    MissingImage,
    MissingTranslation,
    UsageError,
)
from sscaudit.core.item import (
    DELIMITER_LINE,
    EvaluationItem,
    dataset_hash,
    read_items,
    validate_item,
    write_items,
)
from sscaudit.core.raster import Raster
from sscaudit.core.transcript import Transcript, read_transcripts, write_transcripts


def scene_item(**overrides) -> EvaluationItem:
    fields = dict(
        id="bar-0001",
        task_kind="barmax",
        t="Which bar is tallest?",
        gold="b",
        v=Raster(np.arange(60, dtype=np.uint8).reshape(6, 10)),
        v_label="A=3\nB=9",
        choices=["a", "b"],
    )
    fields.update(overrides)
    return EvaluationItem(**fields)


def test_raster_png_roundtrip():
    """Test PNG encoding preserves every pixel and the digest."""
    pixels = np.random.default_rng(0).integers(0, 256, size=(17, 23), dtype=np.uint8)
    raster = Raster(pixels)

    decoded = Raster.from_png_bytes(raster.to_png_bytes())

    assert decoded == raster
    assert decoded.digest() == raster.digest()
    assert np.array_equal(decoded.pixels, pixels)


def test_raster_is_immutable():
    """Test the pixel buffer is read-only and detached from the input."""
    pixels = np.zeros((3, 3), dtype=np.uint8)
    raster = Raster(pixels)
    pixels[0, 0] = 9

    assert raster.pixels[0, 0] == 0
    with pytest.raises(ValueError):
        raster.pixels[0, 0] = 1


def test_raster_digest_includes_shape():
    """Test equal bytes with different shapes hash differently."""
    flat = Raster(np.zeros((2, 6), dtype=np.uint8))
    tall = Raster(np.zeros((6, 2), dtype=np.uint8))

    assert flat != tall
    assert flat.digest() != tall.digest()


def test_raster_rejects_non_2d():
    """Test only 2-D grayscale arrays are accepted."""
    with pytest.raises(ValueError, match="2-D"):
        Raster(np.zeros((2, 2, 3), dtype=np.uint8))


def test_condition_parse():
    """Test condition names parse case-insensitively."""
    assert Condition.parse("SymV") == Condition.SYMV
    assert Condition.parse(" textonly ") == Condition.TEXT_ONLY
    assert Condition.parse_list("full,symt,full") == [Condition.FULL, Condition.SYMT]


def test_condition_parse_unknown():
    """Test unknown names are usage errors."""
    with pytest.raises(UsageError, match="Unknown condition"):
        Condition.parse("audio")
    with pytest.raises(UsageError):
        Condition.parse_list(" , ")


def test_condition_order():
    """Test the canonical output order."""
    assert [c.value for c in sorted(Condition, key=lambda c: c.order)] == [
        "full",
        "symt",
        "symv",
        "textonly",
        "basetext",
    ]
    assert PROTOCOL_CONDITIONS == (Condition.FULL, Condition.SYMT, Condition.SYMV)


def test_item_requires_id():
    """Test items cannot have an empty id."""
    with pytest.raises(ValueError, match="id cannot be empty"):
        scene_item(id="")


def test_validate_item_rules():
    """Test each invariant produces its violation tag."""
    assert validate_item(scene_item()) == []
    assert "gold: gold-not-in-choices" in validate_item(scene_item(gold="z"))
    assert "choices: duplicate-choices" in validate_item(scene_item(choices=["a", "b", "b"]))
    assert "v_label: empty-V_label" in validate_item(scene_item(v_label=""))
    assert "t: delimiter-in-text" in validate_item(scene_item(t=f"x {DELIMITER_LINE}"))
    partial = scene_item(t_img=Raster(np.zeros((2, 2), dtype=np.uint8)))
    assert "t_img: partial-translation" in validate_item(partial)


def test_write_and_read_items(tmp_path):
    """Test items and their images survive a write/read cycle."""
    items = [scene_item(), scene_item(id="bar-0002", gold="a", seed=7, meta={"k": 1})]

    path = write_items(items, tmp_path / "items.jsonl")
    loaded = read_items(path)

    assert [i.id for i in loaded] == ["bar-0001", "bar-0002"]
    assert loaded[0].v == items[0].v
    assert loaded[1].seed == 7
    assert loaded[1].meta == {"k": 1}
    assert (tmp_path / "images" / "bar-0001_v.png").exists()


def test_write_items_rejects_duplicates(tmp_path):
    """Test duplicate ids are reported and nothing is written."""
    with pytest.raises(ItemValidationError, match="duplicate-id"):
        write_items([scene_item(), scene_item()], tmp_path / "items.jsonl")
    assert not (tmp_path / "items.jsonl").exists()


def test_read_items_malformed_line(tmp_path):
    """Test a malformed record names its line."""
    path = tmp_path / "items.jsonl"
    path.write_text('{"id": "a", "task_kind": "barmax", "gold": "a"}\n{not json\n')

    with pytest.raises(ItemValidationError, match="Line 2"):
        read_items(path)


def test_read_items_missing_file(tmp_path):
    """Test a missing item file is a data error."""
    with pytest.raises(ItemValidationError, match="not found"):
        read_items(tmp_path / "absent.jsonl")


def test_dataset_hash_tracks_images(tmp_path):
    """Test the dataset hash changes when only an image changes."""
    path = write_items([scene_item()], tmp_path / "a" / "items.jsonl")
    before = dataset_hash(path)

    other = scene_item(v=Raster(np.ones((6, 10), dtype=np.uint8)))
    write_items([other], path)

    assert dataset_hash(path) != before
    assert len(before) == 64


def test_prompt_bundles():
    """Test each condition carries exactly its modality."""
    item = replace(
        scene_item(),
        t_img=Raster(np.zeros((2, 2), dtype=np.uint8)),
        symv_composite=Raster(np.ones((4, 4), dtype=np.uint8)),
    )

    full = make_prompt_bundle(item, Condition.FULL)
    symt = make_prompt_bundle(item, Condition.SYMT)
    symv = make_prompt_bundle(item, Condition.SYMV)
    text_only = make_prompt_bundle(item, Condition.TEXT_ONLY)

    assert full.images == (item.v,) and full.text == item.t
    assert symt.images == ()
    assert symt.text == f"{item.t}\n{DELIMITER_LINE}\n{item.v_label}"
    assert symv.images == (item.symv_composite,) and symv.text == ""
    assert text_only.images == () and text_only.text == item.t


def test_prompt_bundle_errors():
    """Test SymV needs a translation and image conditions need a scene."""
    with pytest.raises(MissingTranslation):
        make_prompt_bundle(scene_item(), Condition.SYMV)

    text_item = EvaluationItem(id="t-1", task_kind="textarith", t="1+1?", gold="2")
    for condition in (Condition.FULL, Condition.SYMV):
        assert condition.uses_images
        with pytest.raises(MissingImage, match=f"condition {condition.value}"):
            make_prompt_bundle(text_item, condition)
    assert make_prompt_bundle(text_item, Condition.TEXT_ONLY).text == "1+1?"


def test_transcripts_written_sorted(tmp_path):
    """Test transcripts are written in (item_id, condition) order."""
    transcripts = [
        Transcript("b", Condition.SYMV, "m", extracted="x"),
        Transcript("a", Condition.SYMV, "m"),
        Transcript("a", Condition.FULL, "m", score=1),
        Transcript("a", Condition.SYMT, "m", answered=False, error="Timeout: slow"),
    ]

    path = write_transcripts(transcripts, tmp_path / "t.jsonl")
    loaded = read_transcripts(path)

    assert [(t.item_id, t.condition.value) for t in loaded] == [
        ("a", "full"),
        ("a", "symt"),
        ("a", "symv"),
        ("b", "symv"),
    ]
    assert loaded[0].score == 1
    assert loaded[1].answered is False
    assert loaded[1].error == "Timeout: slow"


def test_read_transcripts_bad_condition(tmp_path):
    """Test an unknown condition in a transcript file is a data error."""
    path = tmp_path / "t.jsonl"
    path.write_text('{"item_id": "a", "condition": "audio", "model_id": "m"}\n')

    with pytest.raises(DataValidationError, match="t.jsonl:1"):
        read_transcripts(path)
