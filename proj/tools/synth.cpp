int main() { return 0; }  // placeholder until the engine lands
