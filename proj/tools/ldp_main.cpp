#include "ldp/core/log.hpp"

int main() {
    ldp::log_line("ldp: CLI under construction");
    return 0;
}
