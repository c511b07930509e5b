import time

SESSION_START = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the acceptance gate runs last so it can time the whole session
    items.sort(key=lambda item: item.module.__name__ == "test_acceptance")
