#include "util.h"
#include <engine/api.h>
#include <vector>

int main() { return 0; }
