#include "input.h"

// input
