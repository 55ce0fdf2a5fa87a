#include "mlrag/cli.hpp"

int main(int argc, char** argv) {
    return mlrag::run_cli(argc, argv);
}
