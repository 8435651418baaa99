const char* s = "#include \"no1.h\"";
#include "yes1.h"
const char* t = "/*";
#include "yes2.h"
char c = '"';
#include "yes3.h"
