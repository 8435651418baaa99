/* #include "no1.h" */
/* leading */ #include "yes1.h"
/*
#include "no2.h"
*/
#include "yes2.h" /* trailing
#include "no3.h"
 */ #include "yes3.h"
