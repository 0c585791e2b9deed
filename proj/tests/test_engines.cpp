// cross-engine tests: filled in with the engine
