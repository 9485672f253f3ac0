#include "bimsynth/cli.h"

int main(int argc, char** argv) { return bimsynth::run_cli(argc, argv); }
