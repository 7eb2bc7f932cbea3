#include "fengshui/cli.hpp"

int main(int argc, char** argv) { return fengshui::run_cli(argc, argv); }
