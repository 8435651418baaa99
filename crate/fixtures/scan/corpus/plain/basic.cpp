#include "basic.h"
#include <vector>

int f() { return 1; }
