from .documents import PosetDocument, dump_script, load_script
