#include "astra/cli/app.hpp"

int main(int argc, char** argv) { return astra::cli::run(argc, argv); }
