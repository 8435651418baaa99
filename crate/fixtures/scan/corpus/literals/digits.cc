int big = 1'000'000;
#include "yes1.h"
char q = '\'';
#include <yes2.h>
