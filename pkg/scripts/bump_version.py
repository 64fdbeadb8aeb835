#!/usr/bin/env python3
"""
版本號管理腳本：setup.py 與 motive_workbench/__init__.py 的版本號必須一致

使用方法:
    python scripts/bump_version.py patch            # 0.1.0 -> 0.1.1
    python scripts/bump_version.py minor            # 0.1.0 -> 0.2.0
    python scripts/bump_version.py major            # 0.1.0 -> 1.0.0
    python scripts/bump_version.py check            # 只檢查一致性
    python scripts/bump_version.py minor --dry-run  # 只顯示新版本號
"""

import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

# 檔案 → 版本號樣式（第一組為前綴，第二組為後綴）
VERSION_FILES = {
    ROOT / "setup.py": r'(version=")([^"]+)(")',
    ROOT / "motive_workbench" / "__init__.py": r'(__version__ = ")([^"]+)(")',
}

BUMP_TYPES = ("patch", "minor", "major")


def read_versions():
    """讀取每個檔案中的版本號"""
    versions = {}
    for path, pattern in VERSION_FILES.items():
        match = re.search(pattern, path.read_text(encoding="utf-8"))
        if match is None:
            raise ValueError(f"{path.relative_to(ROOT)} 中找不到版本號")
        versions[path] = match.group(2)
    return versions


def bump_version(current_version, bump_type):
    """根據 bump_type 計算新版本號"""
    major, minor, patch = map(int, current_version.split("."))
    if bump_type == "major":
        return f"{major + 1}.0.0"
    if bump_type == "minor":
        return f"{major}.{minor + 1}.0"
    if bump_type == "patch":
        return f"{major}.{minor}.{patch + 1}"
    raise ValueError(f"Invalid bump type: {bump_type}")


def write_version(new_version):
    for path, pattern in VERSION_FILES.items():
        content = path.read_text(encoding="utf-8")
        path.write_text(re.sub(pattern, lambda m: f"{m.group(1)}{new_version}{m.group(3)}", content, count=1),
                        encoding="utf-8")


def main(argv):
    args = [arg for arg in argv if arg != "--dry-run"]
    dry_run = len(args) != len(argv)
    if len(args) != 1 or args[0] not in BUMP_TYPES + ("check",):
        print("使用方法: python scripts/bump_version.py [patch|minor|major|check] [--dry-run]")
        return 1

    versions = read_versions()
    distinct = set(versions.values())
    if len(distinct) != 1:
        listing = ", ".join(f"{path.relative_to(ROOT)}: {v}" for path, v in versions.items())
        print(f"錯誤: 版本號不一致 - {listing}")
        return 1
    current_version = distinct.pop()

    if args[0] == "check":
        print(f"✅ 版本號一致: {current_version}")
        return 0

    new_version = bump_version(current_version, args[0])
    print(f"更新版本號: {current_version} -> {new_version}")
    if dry_run:
        print("（dry run，未寫入檔案）")
        return 0

    write_version(new_version)
    print("✅ 版本號更新完成！")
    print("\n下一步:")
    print("1. ./make.sh test")
    print(f"2. git commit -am 'Bump version to {new_version}'")
    print(f"3. git tag v{new_version}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
