// #include "no1.h"
#include "yes1.h" // trailing comment
  // #include <no2.h>
