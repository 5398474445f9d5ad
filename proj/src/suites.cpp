// placeholder; verification suites are added with the CLI
