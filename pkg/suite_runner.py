#!/usr/bin/env python3
"""
Script runner shared by the test files
Lets every test_*.py run without pytest and print a pass/fail summary
"""

import traceback


def run_suite(title, namespace):
    """
    Run every test_* function found in a module namespace

    Parameters:
    title (str): suite heading
    namespace (dict): module globals()

    Returns:
    bool: True when every test passed
    """
    tests = [(name, fn) for name, fn in namespace.items() if name.startswith("test_") and callable(fn)]

    print(title)
    print("=" * 50)

    passed = 0
    for name, test in tests:
        try:
            test()
            passed += 1
            print(f"✅ {name}")
        except Exception as e:
            print(f"❌ {name}: {e}")
            traceback.print_exc()

    print("=" * 50)
    print(f"TEST RESULTS: {passed}/{len(tests)} tests passed")
    return passed == len(tests)
