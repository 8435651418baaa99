#include "f.c"
