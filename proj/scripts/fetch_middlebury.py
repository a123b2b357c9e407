#!/usr/bin/env python3
"""Fetch the Middlebury evaluation pairs and convert them to PGM/PPM.

Writes data/<name>/{im2,im6}.ppm, disp2.pgm and region masks so that
the manifests in data/*.txt resolve. Images are never committed.

Sources, tried in order for each dataset:
  1. --from-dir DIR: a local directory holding <name>/ with the usual
     Middlebury file names (im2, im6, disp2, nonocc, all, disc; any of
     .png/.ppm/.pgm).
  2. The Middlebury web site.
  3. Cones only: the copy of the quarter-size Cones pair shipped in the
     pandora source distribution on PyPI (grayscale images, float ground
     truth, non-occlusion mask).

Requires Pillow and numpy.
"""

from __future__ import annotations

import argparse
import io
import sys
import tarfile
import urllib.request
from pathlib import Path

import numpy as np
from PIL import Image

DATA = Path(__file__).resolve().parent.parent / "data"

MIDDLEBURY_V2 = "https://vision.middlebury.edu/stereo/eval/newEval/{name}/{file}"
MIDDLEBURY_2001 = "https://vision.middlebury.edu/stereo/data/scenes2001/data/{name}/{file}"

# name -> (url template, {role: remote file name})
SOURCES = {
    "cones": (MIDDLEBURY_V2, {"left": "im2.png", "right": "im6.png", "gt": "disp2.png",
                              "non_occ": "nonocc.png", "all": "all.png", "non_occ_discont": "disc.png"}),
    "teddy": (MIDDLEBURY_V2, {"left": "im2.png", "right": "im6.png", "gt": "disp2.png",
                              "non_occ": "nonocc.png", "all": "all.png", "non_occ_discont": "disc.png"}),
    "venus": (MIDDLEBURY_V2, {"left": "im2.png", "right": "im6.png", "gt": "disp2.png",
                              "non_occ": "nonocc.png", "all": "all.png", "non_occ_discont": "disc.png"}),
    "sawtooth": (MIDDLEBURY_2001, {"left": "im2.ppm", "right": "im6.ppm", "gt": "disp2.pgm",
                                   "gt_right": "disp6.pgm"}),
}

PANDORA_SDIST = ("https://files.pythonhosted.org/packages/9d/c3/"
                 "0eff8324139f701df979c5f59ace2f44e732aa8d60799fd1c1c56f25f079/pandora-1.9.0.tar.gz")
PANDORA_MEMBERS = {
    "left": "pandora-1.9.0/notebooks/data/Cones_LEFT.tif",
    "right": "pandora-1.9.0/notebooks/data/Cones_RIGHT.tif",
    "gt": "pandora-1.9.0/notebooks/data/Cones_LEFT_GT.tif",
    "non_occ": "pandora-1.9.0/notebooks/data/Occlusion_LEFT.png",
}

MASK_FILES = {"non_occ": "nonocc.pgm", "all": "all.pgm", "non_occ_discont": "disc.pgm",
              "non_occ_textl": "textl.pgm"}


def fetch(url: str, timeout: float) -> bytes:
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def save_image(img: Image.Image, dest: Path) -> None:
    """Stereo images are always stored as P6; the C++ loader reduces them to
    luminance, which is exact for gray sources (R = G = B)."""
    img.convert("RGB").save(dest)


def save_mask(img: Image.Image, dest: Path) -> None:
    a = np.asarray(img.convert("L") if img.mode != "P" else img)
    Image.fromarray(np.where(a != 0, 255, 0).astype(np.uint8)).save(dest)


def save_gt_levels(levels: np.ndarray, dest: Path) -> None:
    Image.fromarray(np.clip(np.rint(levels), 0, 255).astype(np.uint8)).save(dest)


def write_from_images(name: str, images: dict[str, Image.Image], gt_levels: np.ndarray) -> None:
    out = DATA / name
    out.mkdir(parents=True, exist_ok=True)
    save_image(images["left"], out / "im2.ppm")
    save_image(images["right"], out / "im6.ppm")
    save_gt_levels(gt_levels, out / "disp2.pgm")
    if "non_occ" not in images and "gt_right" in images:
        images["non_occ"] = Image.fromarray(cross_checked(gt_levels, np.asarray(images["gt_right"].convert("L"))))
    for role, fname in MASK_FILES.items():
        if role in images:
            save_mask(images[role], out / fname)


def cross_checked(gt_left: np.ndarray, gt_right: np.ndarray, scale: float = 8.0) -> np.ndarray:
    """Non-occlusion mask for 2001 sets, which ship left and right ground
    truth but no mask: a pixel is visible in both views when the right
    ground truth at u - d agrees with d to within one pixel."""
    h, w = gt_left.shape
    d = gt_left / scale
    u = np.arange(w)[None, :] - np.rint(d).astype(int)
    inside = (u >= 0) & (gt_left > 0)
    dr = np.take_along_axis(gt_right, np.clip(u, 0, w - 1), axis=1) / scale
    return np.where(inside & (np.abs(dr - d) <= 1.0), 255, 0).astype(np.uint8)


def from_local(name: str, root: Path) -> bool:
    base = root / name
    if not base.is_dir():
        return False
    _, files = SOURCES[name]
    images = {}
    for role, remote in files.items():
        stem = Path(remote).stem
        found = next((p for ext in (".png", ".ppm", ".pgm") if (p := base / f"{stem}{ext}").exists()), None)
        if found is None:
            if role in ("left", "right", "gt"):
                return False
            continue
        images[role] = Image.open(found)
    write_from_images(name, images, np.asarray(images["gt"].convert("L"), dtype=np.float64))
    return True


def from_middlebury(name: str, timeout: float) -> bool:
    template, files = SOURCES[name]
    images = {}
    for role, remote in files.items():
        try:
            images[role] = Image.open(io.BytesIO(fetch(template.format(name=name, file=remote), timeout)))
        except Exception as exc:  # noqa: BLE001 - any network failure falls through
            if role in ("left", "right", "gt"):
                print(f"  {name}: {remote} unavailable ({exc})", file=sys.stderr)
                return False
    write_from_images(name, images, np.asarray(images["gt"].convert("L"), dtype=np.float64))
    return True


def cones_from_pandora(timeout: float, sdist: Path | None) -> bool:
    try:
        blob = sdist.read_bytes() if sdist else fetch(PANDORA_SDIST, timeout)
    except Exception as exc:  # noqa: BLE001
        print(f"  cones: pandora sdist unavailable ({exc})", file=sys.stderr)
        return False
    images = {}
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
        for role, member in PANDORA_MEMBERS.items():
            images[role] = Image.open(io.BytesIO(tar.extractfile(member).read()))
            images[role].load()
    # Quarter-size Cones ground truth is stored as disparity * 4.
    gt = np.asarray(images["gt"], dtype=np.float64) * 4.0
    write_from_images("cones", images, gt)
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("datasets", nargs="*", default=list(SOURCES), help="subset of: " + ", ".join(SOURCES))
    parser.add_argument("--from-dir", type=Path, help="local directory with Middlebury files")
    parser.add_argument("--pandora-sdist", type=Path, help="already downloaded pandora-1.9.0.tar.gz")
    parser.add_argument("--timeout", type=float, default=60.0)
    args = parser.parse_args()

    missing = []
    for name in args.datasets:
        if name not in SOURCES:
            parser.error(f"unknown dataset {name}")
        ok = (args.from_dir is not None and from_local(name, args.from_dir)) or from_middlebury(name, args.timeout)
        if not ok and name == "cones":
            ok = cones_from_pandora(args.timeout, args.pandora_sdist)
        print(f"{name}: {'ok' if ok else 'FAILED'}")
        if not ok:
            missing.append(name)
    return 1 if missing else 0


if __name__ == "__main__":
    sys.exit(main())
