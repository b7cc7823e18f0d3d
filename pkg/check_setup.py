#!/usr/bin/env python3
"""
Setup checker for the Swahili news text-graph classifier.
Verifies that the required packages, settings and bundled resources are available.
"""
import os
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def check_imports() -> bool:
    """Check if required packages are installed."""
    required_packages = [
        ("numpy", "NumPy"),
        ("scipy", "SciPy"),
        ("sklearn", "scikit-learn"),
        ("pandas", "pandas"),
        ("nltk", "NLTK"),
        ("pydantic", "Pydantic"),
        ("pydantic_settings", "pydantic-settings"),
        ("dotenv", "Python-dotenv"),
        ("yaml", "PyYAML"),
    ]

    all_ok = True
    for module_name, package_name in required_packages:
        try:
            __import__(module_name)
            print(f"  ✅ {package_name}")
        except ImportError:
            print(f"  ❌ {package_name} - Run: pip install -r requirements.txt")
            all_ok = False

    return all_ok


def check_settings() -> bool:
    """Check that TEXTGRAPH_* settings parse and the work directory is writable."""
    try:
        from src.config import load_settings

        settings = load_settings()
        settings.ensure_directories()
        marker = settings.workdir / ".write_test"
        marker.write_text("ok", encoding="utf-8")
        marker.unlink()
        print(f"  ✅ TEXTGRAPH_WORKDIR: {settings.workdir}")
        print(f"  ℹ️  TEXTGRAPH_LOG_LEVEL: {settings.effective_log_level()}")
        print(f"  ℹ️  TEXTGRAPH_JOBS: {settings.jobs}")
        return True
    except Exception as e:
        print(f"  ❌ Settings check failed: {e}")
        return False


def check_resources() -> bool:
    """Check the bundled stopword list."""
    try:
        from src.corpus.cleaning import DEFAULT_STOPWORDS_PATH, load_stopwords

        stopwords = load_stopwords()
        print(f"  ✅ Stopwords: {len(stopwords)} entries ({DEFAULT_STOPWORDS_PATH.name})")
        return True
    except Exception as e:
        print(f"  ❌ Stopword list could not be loaded: {e}")
        return False


def main():
    """Run all checks."""
    print("=" * 70)
    print("🕸️  Swahili News Text GCN - Setup Checker")
    print("=" * 70)
    print()

    print("📦 Checking Python Packages...")
    print("-" * 70)
    packages_ok = check_imports()
    print()

    if not packages_ok:
        print("❌ Install the missing packages before running the remaining checks")
        return 1

    print("📋 Checking Settings...")
    print("-" * 70)
    settings_ok = check_settings()
    print()

    print("📚 Checking Resources...")
    print("-" * 70)
    resources_ok = check_resources()
    print()

    print("=" * 70)
    if settings_ok and resources_ok:
        print("✅ All checks passed! Try:")
        print("   python main.py demo-data --output data/demo.csv")
        print("   python main.py preprocess --dataset data/demo.csv")
        print("   python main.py train --model textgcn")
        return 0

    print("❌ Some checks failed. Please fix the issues above.")
    if os.getenv("TEXTGRAPH_WORKDIR"):
        print("   Check that TEXTGRAPH_WORKDIR points to a writable directory")
    return 1


if __name__ == "__main__":
    sys.exit(main())
