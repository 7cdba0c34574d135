pytest_plugins = ["pytester", "fluortrace.testing"]
