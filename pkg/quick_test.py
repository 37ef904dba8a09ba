#!/usr/bin/env python3
"""
quick_test.py - Quick test script for basic functionality
"""

import os
import sys
import tempfile

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

PAIR = (
    "gen(a, deg=2, copies=1, marks=[{g=1;(0,p)}])",
    "gen(b, deg=3, copies=2, marks=[{g=1;(0,x),(1,y)} {g=2;(1,z)}])",
)

def test_calculus_cycle():
    """Parse two elements, run every operation, and check a few laws."""
    print("Running quick calculus test...")

    work_dir = tempfile.mkdtemp(prefix='garland_test_')

    try:
        from src.calculus import AlgebraParams, GarlandAlgebra
        from src.element_text import parse_element, print_element
        from src.dot_export import export_dot
        from src.identity_lab import check

        alg = GarlandAlgebra(AlgebraParams())

        print("\n1. Testing element parsing...")
        a, b = (parse_element(text, alg) for text in PAIR)
        print(f"✓ Parsed {print_element(a)}")
        print(f"✓ Parsed {print_element(b)}")

        print("\n2. Testing operations...")
        product = alg.product(a, b)
        bracket = alg.bracket(a, b)
        if len(product) != 1 or len(bracket) != 2:
            print("✗ Unexpected expansion sizes")
            return False
        print(f"✓ a•b has {len(product)} term, [a,b] has {len(bracket)} terms")

        print("\n3. Testing bracket = proj(lift • lift)...")
        if alg.proj(alg.product(alg.lift(a), alg.lift(b))) != bracket:
            print("✗ Bracket does not match proj of lifted product")
            return False
        print("✓ Bracket matches")

        print("\n4. Testing DOT export...")
        dot_path = os.path.join(work_dir, "b.dot")
        with open(dot_path, "w") as f:
            f.write(export_dot(b.terms[0].shape))
        print(f"✓ Wrote {dot_path}")

        print("\n5. Testing identity lab...")
        report = check("prop42", 10, 7, AlgebraParams(), show_progress=False)
        if report.failures:
            print(f"✗ prop42 failed on {report.failures} trials")
            return False
        print(f"✓ prop42 passed {report.passes} trials")

        return True

    except Exception as e:
        print(f"✗ Test failed with error: {e}")
        import traceback
        traceback.print_exc()
        return False

    finally:
        # Cleanup
        import shutil
        shutil.rmtree(work_dir, ignore_errors=True)

if __name__ == "__main__":
    success = test_calculus_cycle()
    if success:
        print("\n✓ Quick test PASSED - Basic functionality works!")
    else:
        print("\n✗ Quick test FAILED - Check errors above")
    sys.exit(0 if success else 1)
