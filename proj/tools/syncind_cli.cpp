#include "syncind/harness/cli.hpp"

int main(int argc, char** argv) { return syncind::harness::cli_main(argc, argv); }
