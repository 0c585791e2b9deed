// concurrent runtime tests: filled in with the engine
